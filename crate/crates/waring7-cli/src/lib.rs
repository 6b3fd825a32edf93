//! JSON formats and report assembly around the decomposition library.
//!
//! Complex numbers travel as `[re, im]` pairs. Forms are dense graded-lex
//! coefficient lists or sparse exponent-value terms; sparse input is
//! normalized to dense on output. Reports wrap the library results in
//! plain serializable shapes with stable key order.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use waring7_core::binary::Frame;
use waring7_core::decompose::{
    decompose_seven, verify, Failure, FailureReason, ProbeReport, TrialRecord,
};
use waring7_core::experiments::{
    incidence_check, DoubleLineConicCase, ExperimentReport, IncidenceReport, PurePowerCase,
    RandomQuarticCase, RankTwoCase,
};
use waring7_core::poly::{monomial_count, Decomposition, DecompositionTerm};
use waring7_core::theta::ChainSummary;
use waring7_core::{HomogeneousForm, LinearForm, Scalar, Side, Tolerances};

/// A file or value rejected before any mathematics runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

/// Complex scalar on the wire.
pub type Cx = [f64; 2];

fn cx(z: Scalar) -> Cx {
    [z.re, z.im]
}

fn scalar(c: Cx, what: &str) -> Result<Scalar, InputError> {
    if !c[0].is_finite() || !c[1].is_finite() {
        return Err(InputError(format!("{what} has a non-finite entry")));
    }
    Ok(Scalar::new(c[0], c[1]))
}

fn scalars(cs: &[Cx], what: &str) -> Result<Vec<Scalar>, InputError> {
    cs.iter().map(|&c| scalar(c, what)).collect()
}

// ---------------------------------------------------------------------------
// forms

/// Dense serialized form: coefficients in graded-lex monomial order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DenseForm {
    pub side: String,
    pub nvars: usize,
    pub degree: usize,
    pub coeffs: Vec<Cx>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SparseTerm {
    pub exp: [u32; 3],
    pub value: Cx,
}

/// Sparse serialized form: explicit exponent-value terms. Side defaults to
/// primal, the variable count to 3, and the degree to that of the first
/// term.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SparseForm {
    #[serde(default)]
    pub side: Option<String>,
    #[serde(default)]
    pub nvars: Option<usize>,
    #[serde(default)]
    pub degree: Option<usize>,
    pub terms: Vec<SparseTerm>,
}

/// Either accepted shape of a form file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FormFile {
    Dense(DenseForm),
    Sparse(SparseForm),
}

fn parse_side(s: &str) -> Result<Side, InputError> {
    match s {
        "primal" => Ok(Side::Primal),
        "dual" => Ok(Side::Dual),
        other => Err(InputError(format!(
            "side must be \"primal\" or \"dual\", got \"{other}\""
        ))),
    }
}

impl FormFile {
    pub fn to_form(&self) -> Result<HomogeneousForm, InputError> {
        match self {
            FormFile::Dense(d) => {
                let side = parse_side(&d.side)?;
                if d.nvars != 2 && d.nvars != 3 {
                    return Err(InputError(format!("nvars must be 2 or 3, got {}", d.nvars)));
                }
                let expected = monomial_count(d.nvars, d.degree);
                if d.coeffs.len() != expected {
                    return Err(InputError(format!(
                        "a {}-variable degree-{} form needs {} coefficients, got {}",
                        d.nvars,
                        d.degree,
                        expected,
                        d.coeffs.len()
                    )));
                }
                let coeffs = scalars(&d.coeffs, "a coefficient")?;
                HomogeneousForm::new(side, d.nvars, d.degree, coeffs)
                    .map_err(|e| InputError(format!("invalid form: {e}")))
            }
            FormFile::Sparse(s) => {
                let side = parse_side(s.side.as_deref().unwrap_or("primal"))?;
                let nvars = s.nvars.unwrap_or(3);
                if nvars != 2 && nvars != 3 {
                    return Err(InputError(format!("nvars must be 2 or 3, got {nvars}")));
                }
                let first = s
                    .terms
                    .first()
                    .ok_or_else(|| InputError(String::from("a sparse form needs terms")))?;
                let degree = s
                    .degree
                    .unwrap_or((first.exp[0] + first.exp[1] + first.exp[2]) as usize);
                let mut entries = Vec::with_capacity(s.terms.len());
                for t in &s.terms {
                    let total = (t.exp[0] + t.exp[1] + t.exp[2]) as usize;
                    if total != degree {
                        return Err(InputError(format!(
                            "term exponent {:?} has degree {total}, expected {degree}",
                            t.exp
                        )));
                    }
                    if nvars == 2 && t.exp[2] != 0 {
                        return Err(InputError(format!(
                            "term exponent {:?} uses the third variable of a binary form",
                            t.exp
                        )));
                    }
                    entries.push((t.exp, scalar(t.value, "a term value")?));
                }
                Ok(HomogeneousForm::from_terms(side, nvars, degree, &entries))
            }
        }
    }

    /// Normalized dense serialization of a form.
    pub fn from_form(f: &HomogeneousForm) -> FormFile {
        FormFile::Dense(DenseForm {
            side: f.side().to_string(),
            nvars: f.nvars(),
            degree: f.degree(),
            coeffs: f.coeffs().iter().map(|&z| cx(z)).collect(),
        })
    }
}

/// Requires a primal ternary quartic, the only shape the pipeline accepts.
pub fn require_ternary_quartic(f: &HomogeneousForm) -> Result<(), InputError> {
    if f.side() != Side::Primal {
        return Err(InputError(String::from("the form must be primal")));
    }
    if f.nvars() != 3 {
        return Err(InputError(format!(
            "the form must be ternary, got {} variables",
            f.nvars()
        )));
    }
    if f.degree() != 4 {
        return Err(InputError(format!(
            "the form must be a quartic, got degree {}",
            f.degree()
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// frames and lines

/// Frame file: three dual linear forms by coefficient rows.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameFile {
    pub x0: Vec<Cx>,
    pub x1: Vec<Cx>,
    pub x2: Vec<Cx>,
}

impl FrameFile {
    pub fn to_frame(&self) -> Result<Frame, InputError> {
        let row = |r: &Vec<Cx>, name: &str| -> Result<LinearForm, InputError> {
            if r.len() != 3 {
                return Err(InputError(format!(
                    "frame row {name} needs 3 coefficients, got {}",
                    r.len()
                )));
            }
            Ok(LinearForm::from_coeffs(
                Side::Dual,
                &scalars(r, "a frame coefficient")?,
            ))
        };
        Frame::new(
            row(&self.x0, "x0")?,
            row(&self.x1, "x1")?,
            row(&self.x2, "x2")?,
            1e-9,
        )
        .map_err(|e| InputError(format!("invalid frame: {e}")))
    }

    pub fn from_frame(frame: &Frame) -> FrameFile {
        let row = |i: usize| frame.x(i).coeffs().iter().map(|&z| cx(z)).collect();
        FrameFile {
            x0: row(0),
            x1: row(1),
            x2: row(2),
        }
    }
}

/// Optional special-lines file: dual linear forms to test incidence
/// against.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinesFile {
    pub lines: Vec<Vec<Cx>>,
}

impl LinesFile {
    pub fn to_lines(&self) -> Result<Vec<LinearForm>, InputError> {
        self.lines
            .iter()
            .map(|r| {
                if r.len() != 3 {
                    return Err(InputError(format!(
                        "each line needs 3 coefficients, got {}",
                        r.len()
                    )));
                }
                Ok(LinearForm::from_coeffs(
                    Side::Dual,
                    &scalars(r, "a line coefficient")?,
                ))
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// decompositions

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermDto {
    pub coeff: Cx,
    pub direction: Vec<Cx>,
}

/// Serialized power sum with per-term provenance tags.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionDto {
    pub degree: usize,
    pub terms: Vec<TermDto>,
    pub residual: f64,
    #[serde(default)]
    pub provenance: Vec<String>,
}

impl DecompositionDto {
    pub fn from_core(dec: &Decomposition, provenance: Vec<String>) -> Self {
        DecompositionDto {
            degree: dec.degree,
            terms: dec
                .terms
                .iter()
                .map(|t| TermDto {
                    coeff: cx(t.coefficient),
                    direction: t.direction.coeffs().iter().map(|&z| cx(z)).collect(),
                })
                .collect(),
            residual: dec.target_residual,
            provenance,
        }
    }

    pub fn to_core(&self) -> Result<Decomposition, InputError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (k, t) in self.terms.iter().enumerate() {
            if t.direction.len() != 3 {
                return Err(InputError(format!(
                    "term {k} needs a 3-entry direction, got {}",
                    t.direction.len()
                )));
            }
            let dir = LinearForm::from_coeffs(
                Side::Primal,
                &scalars(&t.direction, "a direction entry")?,
            );
            terms.push(DecompositionTerm::new(scalar(t.coeff, "a coefficient")?, dir));
        }
        if terms.is_empty() {
            return Err(InputError(String::from("a decomposition needs terms")));
        }
        Ok(Decomposition {
            degree: self.degree,
            terms,
            target_residual: self.residual,
        })
    }
}

// ---------------------------------------------------------------------------
// diagnostics

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainDto {
    /// The three map matrices, row-major 2x2.
    pub theta: Vec<Vec<Vec<Cx>>>,
    pub composite: Vec<Vec<Cx>>,
    pub class: String,
    pub disc: Cx,
    pub disc_rel: f64,
    pub fixed_points: Vec<Vec<Cx>>,
    pub closure: Vec<f64>,
}

impl ChainDto {
    pub fn from_core(s: &ChainSummary) -> Self {
        let mat = |m: &[[Scalar; 2]; 2]| -> Vec<Vec<Cx>> {
            m.iter()
                .map(|row| row.iter().map(|&z| cx(z)).collect())
                .collect()
        };
        ChainDto {
            theta: s.theta.iter().map(mat).collect(),
            composite: mat(&s.composite),
            class: s.class.to_string(),
            disc: cx(s.disc),
            disc_rel: s.disc_rel,
            fixed_points: s
                .fixed_points
                .iter()
                .map(|p| p.iter().map(|&z| cx(z)).collect())
                .collect(),
            closure: s.closure.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VStepDto {
    pub applied: bool,
    pub v_rel: f64,
    pub g_rel: f64,
}

/// Machine-readable failure, printed to stderr on exit code 1.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FailureDto {
    pub code: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    pub detail: String,
}

impl FailureDto {
    pub fn new(code: &str, detail: String) -> Self {
        FailureDto {
            code: code.to_string(),
            index: None,
            detail,
        }
    }

    pub fn from_core(f: &Failure) -> Self {
        let index = match f.reason {
            FailureReason::QZero(i) | FailureReason::QSquare(i) => Some(i),
            _ => None,
        };
        FailureDto {
            code: f.reason.code().to_string(),
            index,
            detail: f.detail.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IncidenceEntryDto {
    pub term: usize,
    pub line: usize,
    pub value: f64,
    pub incident: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IncidenceDto {
    pub tol: f64,
    pub entries: Vec<IncidenceEntryDto>,
    pub incident_terms: Vec<usize>,
}

impl IncidenceDto {
    pub fn from_core(r: &IncidenceReport) -> Self {
        IncidenceDto {
            tol: r.tol,
            entries: r
                .entries
                .iter()
                .map(|e| IncidenceEntryDto {
                    term: e.term,
                    line: e.line,
                    value: e.value,
                    incident: e.incident,
                })
                .collect(),
            incident_terms: r.incident_terms(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ToleranceDto {
    pub zero: f64,
    pub verify: f64,
}

// ---------------------------------------------------------------------------
// reports

/// Output of the decompose command: the power sum plus everything needed
/// to reproduce and audit it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecomposeReport {
    pub decomposition: DecompositionDto,
    pub frame: FrameFile,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub chain: ChainDto,
    pub v: VStepDto,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub tolerance: ToleranceDto,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub incidence: Option<IncidenceDto>,
}

/// Runs the pipeline and assembles the serializable report.
pub fn decompose_report(
    f: &HomogeneousForm,
    frame: &Frame,
    seed: Option<u64>,
    tol: &Tolerances,
    lines: Option<&[LinearForm]>,
) -> Result<DecomposeReport, FailureDto> {
    let seven = decompose_seven(f, frame, tol).map_err(|e| FailureDto::from_core(&e))?;
    let mut provenance: Vec<String> = (0..3)
        .flat_map(|i| [format!("pair{i}"), format!("pair{i}")])
        .collect();
    let note = if seven.v_step.applied {
        provenance.push(String::from("triple"));
        None
    } else {
        Some(String::from("already harmonic for this frame"))
    };
    let incidence = lines.map(|ls| {
        IncidenceDto::from_core(&incidence_check(&seven.decomposition, ls, tol.zero))
    });
    Ok(DecomposeReport {
        decomposition: DecompositionDto::from_core(&seven.decomposition, provenance),
        frame: FrameFile::from_frame(frame),
        seed,
        chain: ChainDto::from_core(&seven.six.chain.summary()),
        v: VStepDto {
            applied: seven.v_step.applied,
            v_rel: seven.v_step.v_rel,
            g_rel: seven.v_step.g_rel,
        },
        note,
        tolerance: ToleranceDto {
            zero: tol.zero,
            verify: tol.verify,
        },
        incidence,
    })
}

/// Output of the verify command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub incidence: Option<IncidenceDto>,
}

pub fn verify_report(
    f: &HomogeneousForm,
    dec: &Decomposition,
    tol: &Tolerances,
    lines: Option<&[LinearForm]>,
) -> VerifyReport {
    let residual = verify(f, dec);
    VerifyReport {
        residual,
        tolerance: tol.verify,
        pass: residual <= tol.verify,
        incidence: lines.map(|ls| IncidenceDto::from_core(&incidence_check(dec, ls, tol.zero))),
    }
}

/// Reads a decomposition from either a bare decomposition object or a full
/// decompose report.
pub fn decomposition_from_json(text: &str) -> Result<DecompositionDto, InputError> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| InputError(format!("invalid JSON: {e}")))?;
    let node = value.get("decomposition").unwrap_or(&value);
    serde_json::from_value(node.clone())
        .map_err(|e| InputError(format!("invalid decomposition: {e}")))
}

// ---------------------------------------------------------------------------
// probe

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialDto {
    pub index: u32,
    pub frame: Vec<Vec<Cx>>,
    pub outcome: String,
    pub detail: String,
    pub n_terms: Option<usize>,
    pub residual: Option<f64>,
    pub class: Option<String>,
    pub fixed_point_count: Option<usize>,
    pub disc_rel: Option<f64>,
    pub closure: Option<f64>,
    pub v_applied: Option<bool>,
    pub v_rel: Option<f64>,
    pub g_rel: Option<f64>,
    pub chain: Option<ChainDto>,
}

impl TrialDto {
    fn from_core(r: &TrialRecord) -> Self {
        TrialDto {
            index: r.index,
            frame: r
                .frame_coeffs
                .iter()
                .map(|row| row.iter().map(|&z| cx(z)).collect())
                .collect(),
            outcome: r.outcome.clone(),
            detail: r.detail.clone(),
            n_terms: r.n_terms,
            residual: r.residual,
            class: r.class.map(|c| c.to_string()),
            fixed_point_count: r.fixed_point_count,
            disc_rel: r.disc_rel,
            closure: r.closure,
            v_applied: r.v_applied,
            v_rel: r.v_rel,
            g_rel: r.g_rel,
            chain: r.chain.as_ref().map(ChainDto::from_core),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeDto {
    pub trials: u32,
    pub seed: u64,
    pub successes: u32,
    pub failure_histogram: BTreeMap<String, u32>,
    pub class_histogram: BTreeMap<String, u32>,
    pub records: Vec<TrialDto>,
}

impl ProbeDto {
    pub fn from_core(r: &ProbeReport) -> Self {
        ProbeDto {
            trials: r.trials,
            seed: r.seed,
            successes: r.successes,
            failure_histogram: r.failure_histogram.clone(),
            class_histogram: r.class_histogram.clone(),
            records: r.records.iter().map(TrialDto::from_core).collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// experiments

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PurePowerDto {
    pub frames: u32,
    pub v_applied: u32,
    pub max_g_rel: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankTwoDto {
    pub frames: u32,
    pub frames_checked: u32,
    pub quadrics_checked: u32,
    pub quadrics_zero: u32,
    pub max_disc_rel: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DoubleLineConicDto {
    pub frames: u32,
    pub successes: u32,
    pub classified: u32,
    pub parabolic: u32,
    pub required_successes: u32,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RandomQuarticDto {
    pub frames: u32,
    pub successes: u32,
    pub classified: u32,
    pub diagonalizable: u32,
    pub required_diagonalizable: u32,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentsDto {
    pub seed: u64,
    pub frames: u32,
    pub pure_power: PurePowerDto,
    pub rank_two: RankTwoDto,
    pub double_line_conic: DoubleLineConicDto,
    pub random_quartic: RandomQuarticDto,
    pub pass: bool,
}

impl ExperimentsDto {
    pub fn from_core(r: &ExperimentReport) -> Self {
        let pp = |c: &PurePowerCase| PurePowerDto {
            frames: c.frames,
            v_applied: c.v_applied,
            max_g_rel: c.max_g_rel,
            pass: c.pass,
        };
        let r2 = |c: &RankTwoCase| RankTwoDto {
            frames: c.frames,
            frames_checked: c.frames_checked,
            quadrics_checked: c.quadrics_checked,
            quadrics_zero: c.quadrics_zero,
            max_disc_rel: c.max_disc_rel,
            pass: c.pass,
        };
        let dl = |c: &DoubleLineConicCase| DoubleLineConicDto {
            frames: c.frames,
            successes: c.successes,
            classified: c.classified,
            parabolic: c.parabolic,
            required_successes: c.required_successes,
            pass: c.pass,
        };
        let rq = |c: &RandomQuarticCase| RandomQuarticDto {
            frames: c.frames,
            successes: c.successes,
            classified: c.classified,
            diagonalizable: c.diagonalizable,
            required_diagonalizable: c.required_diagonalizable,
            pass: c.pass,
        };
        ExperimentsDto {
            seed: r.seed,
            frames: r.frames,
            pure_power: pp(&r.pure_power),
            rank_two: r2(&r.rank_two),
            double_line_conic: dl(&r.double_line_conic),
            random_quartic: rq(&r.random_quartic),
            pass: r.pass,
        }
    }
}

// ---------------------------------------------------------------------------
