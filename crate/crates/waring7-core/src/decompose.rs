//! The decomposition pipeline: peel off the fourth power that absorbs the
//! mixed triple derivative, build the theta chain of the remainder, read
//! six directions off a fixed point, and assemble the power sum. Also the
//! residual verifier and a random-frame probe.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::binary::{
    next_index, roots_of_dual_quadratic, sum_of_squares_coeffs, BinaryError, Frame, ProjPoint,
};
use crate::linalg::proj_distance_3;
use crate::poly::{
    apolar_apply, evaluate_dual, power_of_linear, Decomposition, DecompositionTerm,
    HomogeneousForm, LinearForm, Scalar, Side,
};
use crate::theta::{build_chain, ChainSummary, FixedPointClass, ThetaChain, ThetaError};
use crate::Tolerances;

/// Remainder size, relative to the input, below which the quartic is
/// reported as a pure fourth power instead of pushing noise through the
/// chain.
pub const G_VANISH_REL: f64 = 1e-7;

/// Minimum pairwise projective distance between the six directions.
pub const DISTINCT_TOL: f64 = 1e-7;

/// Why a decomposition attempt stopped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailureReason {
    /// The distinguished direction lies on a frame plane.
    VDegenerate,
    /// A quadric of the chain (or the whole remainder) vanishes.
    QZero(usize),
    /// A quadric of the chain is a square.
    QSquare(usize),
    /// A chain map could not be built or is the identity.
    ThetaDegenerate,
    /// Every fixed point of the composite was rejected.
    NoValidFixedPoint,
    /// Two of the candidate directions coincide.
    RootCollision,
    /// A candidate direction lies on a frame axis.
    RootForbidden,
    /// A pair operator vanishes on a candidate direction.
    AntiderivativeUndefined,
    /// The assembled power sum missed its target.
    ResidualTooLarge,
}

impl FailureReason {
    /// Stable machine-readable tag.
    pub fn code(&self) -> &'static str {
        match self {
            FailureReason::VDegenerate => "V_DEGENERATE",
            FailureReason::QZero(_) => "Q_ZERO",
            FailureReason::QSquare(_) => "Q_SQUARE",
            FailureReason::ThetaDegenerate => "THETA_DEGENERATE",
            FailureReason::NoValidFixedPoint => "NO_VALID_FIXED_POINT",
            FailureReason::RootCollision => "ROOT_COLLISION",
            FailureReason::RootForbidden => "ROOT_FORBIDDEN",
            FailureReason::AntiderivativeUndefined => "ANTIDERIVATIVE_UNDEFINED",
            FailureReason::ResidualTooLarge => "RESIDUAL_TOO_LARGE",
        }
    }
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureReason::QZero(i) => write!(f, "{}({i})", self.code()),
            FailureReason::QSquare(i) => write!(f, "{}({i})", self.code()),
            _ => write!(f, "{}", self.code()),
        }
    }
}

/// A failed attempt, with the stage that rejected it and a human detail.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub reason: FailureReason,
    pub detail: String,
}

impl Failure {
    pub fn new(reason: FailureReason, detail: String) -> Self {
        Failure { reason, detail }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.reason.code(), self.detail)
    }
}

impl core::error::Error for Failure {}

fn from_theta(e: ThetaError) -> Failure {
    let detail = format!("{e}");
    match e {
        ThetaError::QZero { index } => Failure::new(FailureReason::QZero(index), detail),
        ThetaError::QSquare { index } => Failure::new(FailureReason::QSquare(index), detail),
        ThetaError::OmegaDegenerate { .. }
        | ThetaError::FrameFitFailed
        | ThetaError::NotInL { .. }
        | ThetaError::IdentityMap => Failure::new(FailureReason::ThetaDegenerate, detail),
    }
}

/// One accepted fixed point worked through to a six-term power sum.
#[derive(Debug, Clone)]
pub struct SixCandidate {
    /// The chain points `p_0, p_1 = theta_0 p_0, p_2 = theta_1 p_1`.
    pub points: [ProjPoint; 3],
    /// Distance from `theta_2 p_2` back to `p_0`.
    pub closure: f64,
    /// Roots of the dual quadric at each plane, in binary coordinates.
    pub roots: [(ProjPoint, ProjPoint); 3],
    /// The six terms, two per plane, in plane order.
    pub decomposition: Decomposition,
}

/// A successful six-term run: the chain it used, the accepted candidate,
/// failures of the discarded fixed points, and a per-plane consistency
/// check of the pair quadrics.
#[derive(Debug, Clone)]
pub struct SixResult {
    pub chain: ThetaChain,
    pub candidate: SixCandidate,
    pub rejected: Vec<Failure>,
    /// Relative distance between each derived quadric of the input and the
    /// same derivative of the expansion.
    pub pair_consistency: [f64; 3],
}

fn root_points(pair: &crate::binary::RootPair) -> (ProjPoint, ProjPoint) {
    (pair.first.clone(), pair.second.clone())
}

/// Works one fixed point through roots, distinctness, and coefficients.
pub fn six_candidate_at(
    g: &HomogeneousForm,
    chain: &ThetaChain,
    p0: &ProjPoint,
    tol: &Tolerances,
) -> Result<SixCandidate, Failure> {
    let p1 = chain.step(0, p0);
    let p2 = chain.step(1, &p1);
    let closure = chain.step(2, &p2).distance(p0);
    let points = [p0.clone(), p1, p2];
    let mut roots: Vec<(ProjPoint, ProjPoint)> = Vec::with_capacity(3);
    for (i, point) in points.iter().enumerate() {
        let h = chain.quadric_at(i, point);
        let pair = roots_of_dual_quadratic(&h, tol.zero).map_err(|e| {
            Failure::new(
                FailureReason::ThetaDegenerate,
                format!("root extraction failed at plane {i}: {e}"),
            )
        })?;
        if pair.repeated {
            return Err(Failure::new(
                FailureReason::RootCollision,
                format!("the dual quadric at plane {i} has a repeated root"),
            ));
        }
        for p in [&pair.first, &pair.second] {
            let [s, t] = *p.coords();
            if s.norm().min(t.norm()) <= tol.zero {
                return Err(Failure::new(
                    FailureReason::RootForbidden,
                    format!("a root at plane {i} lies on a frame axis"),
                ));
            }
        }
        roots.push(root_points(&pair));
    }
    let roots: [(ProjPoint, ProjPoint); 3] = roots.try_into().expect("three root pairs");
    // embed the six directions and insist they are pairwise distinct
    let mut directions: Vec<LinearForm> = Vec::with_capacity(6);
    for (i, (u, w)) in roots.iter().enumerate() {
        directions.push(chain.contexts[i].embed_point(u));
        directions.push(chain.contexts[i].embed_point(w));
    }
    let as_vec3 = |l: &LinearForm| -> [Scalar; 3] {
        let c = l.coeffs();
        [c[0], c[1], c[2]]
    };
    for a in 0..6 {
        for b in (a + 1)..6 {
            let d = proj_distance_3(&as_vec3(&directions[a]), &as_vec3(&directions[b]));
            if d <= DISTINCT_TOL {
                return Err(Failure::new(
                    FailureReason::RootCollision,
                    format!("directions {a} and {b} coincide (distance {d:.3e})"),
                ));
            }
        }
    }
    // coefficients: q_i = alpha u^2 + beta w^2 in binary coordinates, and
    // each quartic term is the pair-operator antiderivative of its square
    let mut terms: Vec<DecompositionTerm> = Vec::with_capacity(6);
    for (i, (u, w)) in roots.iter().enumerate() {
        let u_lin = LinearForm::from_coeffs(Side::Primal, u.coords());
        let w_lin = LinearForm::from_coeffs(Side::Primal, w.coords());
        let (alpha, beta) = sum_of_squares_coeffs(&chain.q_bin[i], &u_lin, &w_lin, tol).map_err(
            |e| match e {
                BinaryError::CollinearDirections => Failure::new(
                    FailureReason::RootCollision,
                    format!("the two roots at plane {i} are collinear"),
                ),
                BinaryError::InconsistentSystem { residual } => Failure::new(
                    FailureReason::ResidualTooLarge,
                    format!("plane {i} squares missed their quadric (residual {residual:.3e})"),
                ),
                other => Failure::new(FailureReason::ThetaDegenerate, format!("{other}")),
            },
        )?;
        let pair_op = chain.frame.pair_operator(i);
        let op_norm = pair_op.max_norm();
        for (coeff, k) in [(alpha, 2 * i), (beta, 2 * i + 1)] {
            let dir = &directions[k];
            let val = evaluate_dual(&pair_op, dir);
            let dir_norm = dir.max_norm();
            if val.norm() <= tol.zero * op_norm * dir_norm * dir_norm {
                return Err(Failure::new(
                    FailureReason::AntiderivativeUndefined,
                    format!("the pair operator of plane {i} vanishes on direction {k}"),
                ));
            }
            terms.push(DecompositionTerm::new(coeff / (12.0 * val), dir.clone()));
        }
    }
    let decomposition = Decomposition {
        degree: 4,
        terms,
        target_residual: 0.0,
    };
    let expansion = decomposition.expand();
    let residual = (&expansion - g).max_norm() / g.max_norm();
    if residual > tol.verify {
        return Err(Failure::new(
            FailureReason::ResidualTooLarge,
            format!("six-term expansion misses the remainder by {residual:.3e}"),
        ));
    }
    Ok(SixCandidate {
        points,
        closure,
        roots,
        decomposition: Decomposition {
            target_residual: residual,
            ..decomposition
        },
    })
}

/// Six fourth powers, two per frame plane, summing to a quartic whose
/// mixed triple derivative vanishes.
pub fn decompose_six(
    g: &HomogeneousForm,
    frame: &Frame,
    tol: &Tolerances,
) -> Result<SixResult, Failure> {
    if g.max_norm() == 0.0 {
        return Err(Failure::new(
            FailureReason::QZero(0),
            String::from("the form is identically zero"),
        ));
    }
    let chain = build_chain(g, frame, tol).map_err(from_theta)?;
    let mut best: Option<SixCandidate> = None;
    let mut failures: Vec<Failure> = Vec::new();
    for p0 in &chain.fixed.points {
        match six_candidate_at(g, &chain, p0, tol) {
            Ok(c) => {
                let better = best
                    .as_ref()
                    .map(|b| c.decomposition.target_residual < b.decomposition.target_residual)
                    .unwrap_or(true);
                if better {
                    best = Some(c);
                }
            }
            Err(f) => failures.push(f),
        }
    }
    let candidate = match best {
        Some(c) => c,
        None => {
            if failures.len() == 1 {
                return Err(failures.pop().expect("one failure"));
            }
            let detail = failures
                .iter()
                .enumerate()
                .map(|(k, f)| format!("fixed point {k}: {f}"))
                .collect::<Vec<_>>()
                .join("; ");
            return Err(Failure::new(FailureReason::NoValidFixedPoint, detail));
        }
    };
    let expansion = candidate.decomposition.expand();
    let mut pair_consistency = [0.0; 3];
    for (i, slot) in pair_consistency.iter_mut().enumerate() {
        let op = frame.pair_operator(i);
        let lhs = apolar_apply(&op, g);
        let rhs = apolar_apply(&op, &expansion);
        *slot = crate::poly::rel_distance(&lhs, &rhs);
    }
    Ok(SixResult {
        chain,
        candidate,
        rejected: failures,
        pair_consistency,
    })
}

/// Residuals of the structural identities behind the six-term split:
/// deriving the expansion along `x^i` leaves one cubic per remaining
/// plane, each cubic is annihilated by the functional of its own plane,
/// and the mixed second derivative of the target reappears as the pair
/// quadric of the third plane.
#[derive(Debug, Clone)]
pub struct ProofChecks {
    /// Plane i: distance of the `x^i` derivative of the expansion from the
    /// sum of the two pair cubics.
    pub split: [f64; 3],
    /// Plane i: relative size of the `x^{i'}` derivative of the cubic that
    /// should live in its kernel.
    pub head_kernel: [f64; 3],
    /// Plane i: same for `x^{i''}` and the other cubic.
    pub tail_kernel: [f64; 3],
    /// Plane i: distance of the mixed derivative of the target from the
    /// matching derivative of the expansion.
    pub quadric_match: [f64; 3],
}

impl ProofChecks {
    /// Largest of the twelve residuals.
    pub fn worst(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for part in [
            &self.split,
            &self.head_kernel,
            &self.tail_kernel,
            &self.quadric_match,
        ] {
            for &r in part.iter() {
                worst = worst.max(r);
            }
        }
        worst
    }
}

/// Evaluates the structural identities on a six-term candidate against its
/// target. Every residual is small exactly when the candidate has the
/// claimed two-terms-per-plane shape.
pub fn proof_checks(
    g: &HomogeneousForm,
    candidate: &SixCandidate,
    frame: &Frame,
) -> ProofChecks {
    let pair = |j: usize| -> HomogeneousForm {
        let d = Decomposition {
            degree: 4,
            terms: candidate.decomposition.terms[2 * j..2 * j + 2].to_vec(),
            target_residual: 0.0,
        };
        d.expand()
    };
    let pairs = [pair(0), pair(1), pair(2)];
    let expansion = &(&pairs[0] + &pairs[1]) + &pairs[2];
    let mut checks = ProofChecks {
        split: [0.0; 3],
        head_kernel: [0.0; 3],
        tail_kernel: [0.0; 3],
        quadric_match: [0.0; 3],
    };
    for i in 0..3 {
        let i1 = next_index(i);
        let i2 = next_index(i1);
        let xi = frame.x(i).form();
        let x_head = frame.x(i1);
        let x_tail = frame.x(i2);
        // cubics left after deriving the two off-plane pairs along x^i
        let f_head = apolar_apply(xi, &pairs[i1]);
        let f_tail = apolar_apply(xi, &pairs[i2]);
        let derived = apolar_apply(xi, &expansion);
        checks.split[i] = crate::poly::rel_distance(&derived, &(&f_head + &f_tail));
        let kernel_rel = |f: &HomogeneousForm, x: &LinearForm| -> f64 {
            let scale = 3.0 * f.max_norm() * x.max_norm();
            if scale == 0.0 {
                return 0.0;
            }
            apolar_apply(x.form(), f).max_norm() / scale
        };
        checks.head_kernel[i] = kernel_rel(&f_head, x_head);
        checks.tail_kernel[i] = kernel_rel(&f_tail, x_tail);
        let lhs = apolar_apply(x_head.form(), &apolar_apply(xi, g));
        let rhs = apolar_apply(x_head.form(), &f_tail);
        checks.quadric_match[i] = crate::poly::rel_distance(&lhs, &rhs);
    }
    checks
}

/// The fourth-power peel: how large the mixed triple derivative was, the
/// term that absorbs it, and the remainder.
#[derive(Debug, Clone)]
pub struct VStep {
    /// False when the input already had a vanishing triple derivative.
    pub applied: bool,
    /// Size of the triple derivative relative to the input.
    pub v_rel: f64,
    /// The absorbed term, present exactly when `applied`.
    pub term: Option<DecompositionTerm>,
    /// The remainder the six-term stage works on.
    pub g: HomogeneousForm,
    /// Remainder size relative to the input (1 when nothing was peeled).
    pub g_rel: f64,
}

/// Splits `f = c v^4 + g` with `g` annihilated by the triple operator,
/// where `v` is the triple derivative of `f` itself.
pub fn v_step(f: &HomogeneousForm, frame: &Frame, tol: &Tolerances) -> Result<VStep, Failure> {
    assert_eq!(f.degree(), 4, "the pipeline decomposes quartics");
    assert_eq!(f.nvars(), 3);
    if f.max_norm() == 0.0 {
        return Err(Failure::new(
            FailureReason::QZero(0),
            String::from("the form is identically zero"),
        ));
    }
    let triple = frame.triple_operator();
    let dv = apolar_apply(&triple, f);
    let scale = 24.0 * f.max_norm() * triple.max_norm();
    let v_rel = dv.max_norm() / scale;
    if v_rel <= tol.zero {
        return Ok(VStep {
            applied: false,
            v_rel,
            term: None,
            g: f.clone(),
            g_rel: 1.0,
        });
    }
    let v = LinearForm::new(dv).expect("triple derivative of a quartic is linear");
    let tv = evaluate_dual(&triple, &v);
    let v_norm = v.max_norm();
    if tv.norm() <= tol.zero * triple.max_norm() * v_norm * v_norm * v_norm {
        return Err(Failure::new(
            FailureReason::VDegenerate,
            String::from("the distinguished direction lies on a frame plane"),
        ));
    }
    let coeff = Scalar::ONE / (24.0 * tv);
    let g = f - &power_of_linear(&v, 4).scaled(coeff);
    let defect = apolar_apply(&triple, &g).max_norm();
    assert!(
        defect <= 1e-10 * scale,
        "power step failed to cancel the triple derivative"
    );
    let g_rel = g.max_norm() / f.max_norm();
    Ok(VStep {
        applied: true,
        v_rel,
        term: Some(DecompositionTerm::new(coeff, v)),
        g,
        g_rel,
    })
}

/// A full run on a quartic: the power step, the six-term stage on the
/// remainder, and the combined decomposition with its residual against the
/// input.
#[derive(Debug, Clone)]
pub struct SevenResult {
    pub v_step: VStep,
    pub six: SixResult,
    /// Six or seven terms; the peeled power, when present, comes last.
    pub decomposition: Decomposition,
    pub residual: f64,
}

/// Joins the six-term candidate with the peeled power and gates the final
/// residual.
fn finish_seven(
    f: &HomogeneousForm,
    vs: VStep,
    six: SixResult,
    tol: &Tolerances,
) -> Result<SevenResult, Failure> {
    let mut terms = six.candidate.decomposition.terms.clone();
    if let Some(t) = &vs.term {
        terms.push(t.clone());
    }
    let mut decomposition = Decomposition {
        degree: 4,
        terms,
        target_residual: 0.0,
    };
    let residual = (&decomposition.expand() - f).max_norm() / f.max_norm();
    decomposition.target_residual = residual;
    if residual > tol.verify {
        return Err(Failure::new(
            FailureReason::ResidualTooLarge,
            format!("assembled power sum misses the input by {residual:.3e}"),
        ));
    }
    Ok(SevenResult {
        v_step: vs,
        six,
        decomposition,
        residual,
    })
}

fn vanishing_remainder(vs: &VStep) -> Failure {
    Failure::new(
        FailureReason::QZero(0),
        format!(
            "the remainder after the power step is {:.3e} of the input; \
             the quartic is numerically a pure fourth power",
            vs.g_rel
        ),
    )
}

/// At most seven fourth powers summing to `f`: one along the triple
/// derivative when it is present, plus two per frame plane.
pub fn decompose_seven(
    f: &HomogeneousForm,
    frame: &Frame,
    tol: &Tolerances,
) -> Result<SevenResult, Failure> {
    let vs = v_step(f, frame, tol)?;
    if vs.applied && vs.g_rel <= G_VANISH_REL {
        return Err(vanishing_remainder(&vs));
    }
    let six = decompose_six(&vs.g, frame, tol)?;
    finish_seven(f, vs, six, tol)
}

/// Relative residual of a decomposition against a target (absolute norm of
/// the expansion when the target is zero).
pub fn verify(f: &HomogeneousForm, dec: &Decomposition) -> f64 {
    let expansion = dec.expand();
    let scale = f.max_norm();
    if scale == 0.0 {
        return expansion.max_norm();
    }
    (&expansion - f).max_norm() / scale
}

/// One probe trial: the sampled frame and what happened to it.
#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub index: u32,
    /// The nine sampled dual coefficients, one row per frame operator.
    pub frame_coeffs: [[Scalar; 3]; 3],
    /// "OK" or a failure code.
    pub outcome: String,
    pub detail: String,
    pub n_terms: Option<usize>,
    pub residual: Option<f64>,
    pub class: Option<FixedPointClass>,
    pub fixed_point_count: Option<usize>,
    pub disc_rel: Option<f64>,
    pub closure: Option<f64>,
    pub v_applied: Option<bool>,
    pub v_rel: Option<f64>,
    pub g_rel: Option<f64>,
    /// Full chain snapshot, present once the chain was built.
    pub chain: Option<ChainSummary>,
}

/// Aggregates of a probe run over random frames.
#[derive(Debug, Clone)]
pub struct ProbeReport {
    pub trials: u32,
    pub seed: u64,
    pub successes: u32,
    /// Failure code to count, over failed trials.
    pub failure_histogram: BTreeMap<String, u32>,
    /// Composite classification to count, over trials whose chain was
    /// built.
    pub class_histogram: BTreeMap<String, u32>,
    pub records: Vec<TrialRecord>,
}

/// Coefficient rows for a random frame, real and imaginary parts uniform
/// on the unit interval, one row per dual functional.
pub fn sample_frame(rng: &mut ChaCha12Rng) -> [[Scalar; 3]; 3] {
    let mut out = [[Scalar::ZERO; 3]; 3];
    for row in &mut out {
        for c in row.iter_mut() {
            let re = rng.gen::<f64>();
            let im = rng.gen::<f64>();
            *c = Scalar::new(re, im);
        }
    }
    out
}

/// The frame drawn from a seed, built from [`sample_frame`] rows.
pub fn random_frame(seed: u64) -> Result<Frame, crate::binary::BinaryError> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let rows = sample_frame(&mut rng);
    let lin = |r: &[Scalar; 3]| LinearForm::from_coeffs(Side::Dual, r);
    Frame::new(lin(&rows[0]), lin(&rows[1]), lin(&rows[2]), 1e-9)
}

/// Runs the seven-term pipeline on `f` over `trials` random frames drawn
/// from the given seed, recording outcomes per trial.
pub fn probe_frames(f: &HomogeneousForm, trials: u32, seed: u64, tol: &Tolerances) -> ProbeReport {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut report = ProbeReport {
        trials,
        seed,
        successes: 0,
        failure_histogram: BTreeMap::new(),
        class_histogram: BTreeMap::new(),
        records: Vec::with_capacity(trials as usize),
    };
    for index in 0..trials {
        let coeffs = sample_frame(&mut rng);
        let mut rec = TrialRecord {
            index,
            frame_coeffs: coeffs,
            outcome: String::from("OK"),
            detail: String::new(),
            n_terms: None,
            residual: None,
            class: None,
            fixed_point_count: None,
            disc_rel: None,
            closure: None,
            v_applied: None,
            v_rel: None,
            g_rel: None,
            chain: None,
        };
        let outcome = run_trial(f, &coeffs, tol, &mut rec);
        match outcome {
            Ok(()) => report.successes += 1,
            Err(fail) => {
                rec.outcome = fail.reason.code().to_string();
                rec.detail = fail.detail;
                *report
                    .failure_histogram
                    .entry(rec.outcome.clone())
                    .or_insert(0) += 1;
            }
        }
        if let Some(class) = rec.class {
            *report
                .class_histogram
                .entry(class.to_string())
                .or_insert(0) += 1;
        }
        report.records.push(rec);
    }
    report
}

fn run_trial(
    f: &HomogeneousForm,
    coeffs: &[[Scalar; 3]; 3],
    tol: &Tolerances,
    rec: &mut TrialRecord,
) -> Result<(), Failure> {
    let mk = |row: &[Scalar; 3]| LinearForm::from_coeffs(Side::Dual, row);
    let frame = Frame::new(mk(&coeffs[0]), mk(&coeffs[1]), mk(&coeffs[2]), tol.zero)
        .map_err(|e| Failure::new(FailureReason::ThetaDegenerate, format!("{e}")))?;
    let vs = v_step(f, &frame, tol)?;
    rec.v_applied = Some(vs.applied);
    rec.v_rel = Some(vs.v_rel);
    rec.g_rel = Some(vs.g_rel);
    if vs.applied && vs.g_rel <= G_VANISH_REL {
        return Err(vanishing_remainder(&vs));
    }
    let six = decompose_six(&vs.g, &frame, tol)?;
    rec.class = Some(six.chain.fixed.class);
    rec.fixed_point_count = Some(six.chain.fixed.points.len());
    rec.disc_rel = Some(six.chain.fixed.disc_rel);
    rec.closure = Some(six.candidate.closure);
    rec.chain = Some(six.chain.summary());
    let seven = finish_seven(f, vs, six, tol)?;
    rec.n_terms = Some(seven.decomposition.terms.len());
    rec.residual = Some(seven.residual);
    Ok(())
}
