//! The projective-line maps that organize a quartic around a frame: the
//! functional lambda, the cubic swap psi, the transported maps theta_i
//! between consecutive quadric complements, their triple composition, and
//! its fixed points.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::binary::{
    combine, coords_in_basis, is_square, l_space_basis, next_index, omega_map, quadric_perp,
    BinaryContext, BinaryError, Frame, ProjMap, ProjPoint,
};
use crate::linalg::eig2;
use crate::poly::{apolar_apply, power_of_linear, HomogeneousForm, LinearForm, Scalar, Side};
use crate::Tolerances;

/// Discriminant threshold separating one fixed point from two; looser than
/// the zero tolerance so a structurally repeated eigenvalue stays visible
/// through accumulated round-off.
pub const PARABOLIC_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub enum ThetaError {
    /// The quadric at `index` is numerically zero.
    QZero { index: usize },
    /// The quadric at `index` is a square, breaking the omega hypothesis.
    QSquare { index: usize },
    /// An omega defining system had the wrong nullity.
    OmegaDegenerate { nullity: usize },
    /// A projective frame fit or map inversion failed.
    FrameFitFailed,
    /// A form claimed to lie in an L space failed its consistency check.
    NotInL { residual: f64 },
    /// The composite map fixes every point.
    IdentityMap,
}

impl fmt::Display for ThetaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThetaError::QZero { index } => write!(f, "quadric q_{index} is numerically zero"),
            ThetaError::QSquare { index } => write!(f, "quadric q_{index} is a square"),
            ThetaError::OmegaDegenerate { nullity } => {
                write!(f, "omega system has nullity {nullity}, expected 1")
            }
            ThetaError::FrameFitFailed => write!(f, "projective frame fit failed"),
            ThetaError::NotInL { residual } => {
                write!(f, "form is outside its L space (residual {residual:.3e})")
            }
            ThetaError::IdentityMap => write!(f, "composite map is the identity"),
        }
    }
}

impl core::error::Error for ThetaError {}

fn lift_binary_error(e: BinaryError, index: usize) -> ThetaError {
    match e {
        BinaryError::OmegaDegenerate { nullity } => ThetaError::OmegaDegenerate { nullity },
        BinaryError::FrameFitFailed => ThetaError::FrameFitFailed,
        BinaryError::NotInKernel { residual } | BinaryError::InconsistentSystem { residual } => {
            ThetaError::NotInL { residual }
        }
        BinaryError::ZeroForm => ThetaError::QZero { index },
        other => panic!("unexpected binary failure: {other}"),
    }
}

/// The data of one psi map: a cubic `c` with vanishing mixed derivative,
/// the two quadrics it differentiates to, and the binary contexts on the
/// domain (kernel of `x^i`) and codomain (kernel of `x^{i'}`) sides.
#[derive(Debug, Clone)]
pub struct PsiContext {
    c: HomogeneousForm,
    dom_index: usize,
    x_cod: LinearForm,
    ctx_dom: BinaryContext,
    ctx_cod: BinaryContext,
    q_tail: HomogeneousForm,
    q_head: HomogeneousForm,
    q_tail_bin: HomogeneousForm,
    q_head_bin: HomogeneousForm,
    vcube: HomogeneousForm,
}

impl PsiContext {
    /// Builds the psi data for frame index `i` from the cubic `c`
    /// (the derivative of the quartic along `x^{i''}`).
    ///
    /// Panics when the mixed derivative of `c` along `x^i, x^{i'}` is not
    /// numerically zero; returns `QZero` when either quadric vanishes.
    pub fn new(
        c: HomogeneousForm,
        frame: &Frame,
        i: usize,
        tol: &Tolerances,
    ) -> Result<Self, ThetaError> {
        assert_eq!(c.degree(), 3, "psi needs a cubic");
        assert_eq!(c.nvars(), 3);
        let i1 = next_index(i);
        let i2 = next_index(i1);
        let x_dom = frame.x(i).clone();
        let x_cod = frame.x(i1).clone();
        let mixed = apolar_apply(
            &crate::poly::dual_multiply(x_dom.form(), x_cod.form()),
            &c,
        );
        let c_scale = c.max_norm() * x_dom.max_norm() * x_cod.max_norm() * 6.0;
        assert!(
            mixed.max_norm() <= 1e-6 * c_scale.max(1e-300),
            "mixed derivative of c along the frame pair does not vanish"
        );
        let q_head = apolar_apply(x_dom.form(), &c);
        let q_tail = apolar_apply(x_cod.form(), &c);
        let q_scale = 3.0 * c.max_norm();
        if q_tail.max_norm() <= tol.zero * q_scale * x_cod.max_norm() {
            return Err(ThetaError::QZero { index: i });
        }
        if q_head.max_norm() <= tol.zero * q_scale * x_dom.max_norm() {
            return Err(ThetaError::QZero { index: i1 });
        }
        let ctx_dom = frame.context(i);
        let ctx_cod = frame.context(i1);
        let q_tail_bin = ctx_dom
            .restrict(&q_tail, tol.zero)
            .map_err(|e| lift_binary_error(e, i))?;
        let q_head_bin = ctx_cod
            .restrict(&q_head, tol.zero)
            .map_err(|e| lift_binary_error(e, i1))?;
        let vcube = power_of_linear(frame.v(i2), 3);
        Ok(PsiContext {
            c,
            dom_index: i,
            x_cod,
            ctx_dom,
            ctx_cod,
            q_tail,
            q_head,
            q_tail_bin,
            q_head_bin,
            vcube,
        })
    }

    pub fn cubic(&self) -> &HomogeneousForm {
        &self.c
    }

    pub fn domain_index(&self) -> usize {
        self.dom_index
    }

    /// The quadric the domain derivative is proportional to (`q_i`).
    pub fn q_tail(&self) -> &HomogeneousForm {
        &self.q_tail
    }

    /// The quadric on the codomain side (`q_{i'}`).
    pub fn q_head(&self) -> &HomogeneousForm {
        &self.q_head
    }

    pub fn q_tail_binary(&self) -> &HomogeneousForm {
        &self.q_tail_bin
    }

    pub fn q_head_binary(&self) -> &HomogeneousForm {
        &self.q_head_bin
    }

    pub fn domain_context(&self) -> &BinaryContext {
        &self.ctx_dom
    }

    pub fn codomain_context(&self) -> &BinaryContext {
        &self.ctx_cod
    }

    /// The cube of the direction annihilated by both frame operators.
    pub fn vcube(&self) -> &HomogeneousForm {
        &self.vcube
    }

    /// The scalar with `d_{x^{i'}} F = lambda q_tail`.
    pub fn lambda(&self, f: &HomogeneousForm, tol: &Tolerances) -> Result<Scalar, ThetaError> {
        lambda_functional(f, &self.q_tail, &self.x_cod, tol)
    }

    /// `psi(F) = lambda(F) c - F`.
    pub fn apply(
        &self,
        f: &HomogeneousForm,
        tol: &Tolerances,
    ) -> Result<HomogeneousForm, ThetaError> {
        let lambda = self.lambda(f, tol)?;
        Ok(&self.c.scaled(lambda) - f)
    }
}

/// The unique scalar with `d_{x_tail} F = lambda q_tail`, by Hermitian
/// projection; errors when the derivative is not proportional to the
/// quadric.
pub fn lambda_functional(
    f: &HomogeneousForm,
    q_tail: &HomogeneousForm,
    x_tail: &LinearForm,
    tol: &Tolerances,
) -> Result<Scalar, ThetaError> {
    assert_eq!(f.degree(), 3, "lambda is defined on cubics");
    assert_eq!(q_tail.degree(), 2);
    let df = apolar_apply(x_tail.form(), f);
    let qq: f64 = q_tail.coeffs().iter().map(|c| c.norm_sqr()).sum();
    assert!(qq > 0.0, "q_tail must be nonzero");
    let proj: Scalar = q_tail
        .coeffs()
        .iter()
        .zip(df.coeffs())
        .map(|(q, d)| q.conj() * d)
        .sum();
    let lambda = proj / qq;
    let residual = (&df - &q_tail.scaled(lambda)).max_norm() / q_tail.max_norm();
    if residual > tol.verify * (1.0 + df.max_norm() / q_tail.max_norm()) {
        return Err(ThetaError::NotInL { residual });
    }
    Ok(lambda)
}

/// One fixed point or two.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedPointClass {
    Parabolic,
    Diagonalizable,
}

impl fmt::Display for FixedPointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixedPointClass::Parabolic => write!(f, "parabolic"),
            FixedPointClass::Diagonalizable => write!(f, "diagonalizable"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FixedPoints {
    pub class: FixedPointClass,
    pub points: Vec<ProjPoint>,
    /// Raw discriminant of the normalized matrix.
    pub disc: Scalar,
    /// Discriminant modulus relative to the squared Frobenius norm.
    pub disc_rel: f64,
}

/// The fixed points of a projective-line automorphism, classified by the
/// normalized discriminant: below `parabolic_tol` means a single point.
pub fn fixed_points(m: &ProjMap, parabolic_tol: f64) -> Result<FixedPoints, ThetaError> {
    let mat = m.matrix();
    let tr_half = (mat[(0, 0)] + mat[(1, 1)]) / 2.0;
    let fro = mat.frobenius_norm();
    let off = (mat[(0, 1)].norm_sqr()
        + mat[(1, 0)].norm_sqr()
        + (mat[(0, 0)] - tr_half).norm_sqr()
        + (mat[(1, 1)] - tr_half).norm_sqr())
    .sqrt();
    if off <= 1e-9 * fro {
        return Err(ThetaError::IdentityMap);
    }
    let e = eig2(mat);
    let disc_rel = e.disc.norm() / (fro * fro);
    if disc_rel <= parabolic_tol {
        return Ok(FixedPoints {
            class: FixedPointClass::Parabolic,
            points: alloc::vec![ProjPoint::new(e.vectors[0])],
            disc: e.disc,
            disc_rel,
        });
    }
    Ok(FixedPoints {
        class: FixedPointClass::Diagonalizable,
        points: alloc::vec![ProjPoint::new(e.vectors[0]), ProjPoint::new(e.vectors[1])],
        disc: e.disc,
        disc_rel,
    })
}

/// Everything built for one quartic and frame: quadrics, contexts,
/// complement bases, the three theta maps, their composition, and its
/// fixed points.
#[derive(Debug, Clone)]
pub struct ThetaChain {
    pub frame: Frame,
    pub contexts: [BinaryContext; 3],
    /// Binary coordinates of `q_i` in context `i`.
    pub q_bin: [HomogeneousForm; 3],
    /// Orthonormal bases of the complements of the `q_i`.
    pub perp: [(HomogeneousForm, HomogeneousForm); 3],
    pub theta: [ProjMap; 3],
    pub composite: ProjMap,
    pub fixed: FixedPoints,
    /// Projective distance back to each fixed point after applying the
    /// three maps in order.
    pub closure: Vec<f64>,
}

impl ThetaChain {
    /// Sends a point of the complement of `q_i` through `theta_i`.
    pub fn step(&self, i: usize, p: &ProjPoint) -> ProjPoint {
        self.theta[i].apply(p)
    }

    /// The dual quadric named by coordinates in the complement basis of
    /// `q_i`.
    pub fn quadric_at(&self, i: usize, p: &ProjPoint) -> HomogeneousForm {
        combine(&self.perp[i], p)
    }

    /// Snapshot of the chain for reporting: map matrices, discriminant
    /// data, and fixed points with their closure distances.
    pub fn summary(&self) -> ChainSummary {
        let entries = |m: &ProjMap| -> [[Scalar; 2]; 2] {
            let a = m.matrix();
            [[a[(0, 0)], a[(0, 1)]], [a[(1, 0)], a[(1, 1)]]]
        };
        ChainSummary {
            theta: [
                entries(&self.theta[0]),
                entries(&self.theta[1]),
                entries(&self.theta[2]),
            ],
            composite: entries(&self.composite),
            class: self.fixed.class,
            disc: self.fixed.disc,
            disc_rel: self.fixed.disc_rel,
            fixed_points: self.fixed.points.iter().map(|p| *p.coords()).collect(),
            closure: self.closure.clone(),
        }
    }
}

/// Plain-data view of a chain, detached from the forms that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSummary {
    pub theta: [[[Scalar; 2]; 2]; 3],
    pub composite: [[Scalar; 2]; 2],
    pub class: FixedPointClass,
    pub disc: Scalar,
    pub disc_rel: f64,
    pub fixed_points: Vec<[Scalar; 2]>,
    pub closure: Vec<f64>,
}

/// Builds theta_i from its psi context and the two complement bases.
fn theta_from_psi(
    psi: &PsiContext,
    perp_dom: &(HomogeneousForm, HomogeneousForm),
    perp_cod: &(HomogeneousForm, HomogeneousForm),
    tol: &Tolerances,
) -> Result<ProjMap, ThetaError> {
    let i = psi.dom_index;
    let i1 = next_index(i);
    if is_square(&psi.q_tail_bin, tol.zero).map_err(|e| lift_binary_error(e, i))? {
        return Err(ThetaError::QSquare { index: i });
    }
    if is_square(&psi.q_head_bin, tol.zero).map_err(|e| lift_binary_error(e, i1))? {
        return Err(ThetaError::QSquare { index: i1 });
    }
    // the domain omega differentiates along the class of x^{i'}, which is
    // the first dual coordinate of context i; the codomain omega uses the
    // class of x^i, the second dual coordinate of context i'
    let x_dom = LinearForm::from_coeffs(Side::Dual, &[Scalar::ONE, Scalar::ZERO]);
    let x_cod = LinearForm::from_coeffs(Side::Dual, &[Scalar::ZERO, Scalar::ONE]);
    let l_dom = l_space_basis(&x_dom, perp_dom).map_err(|e| lift_binary_error(e, i))?;
    let l_cod = l_space_basis(&x_cod, perp_cod).map_err(|e| lift_binary_error(e, i1))?;
    let m_dom = omega_map(&psi.q_tail_bin, &x_dom, perp_dom, &l_dom, tol)
        .map_err(|e| lift_binary_error(e, i))?;
    let m_cod = omega_map(&psi.q_head_bin, &x_cod, perp_cod, &l_cod, tol)
        .map_err(|e| lift_binary_error(e, i1))?;
    // psi is linear on L, so its matrix in the chosen orthonormal bases
    // composes directly with the omega representatives
    let mut cols = Vec::with_capacity(2);
    for basis_cubic in [&l_dom.0, &l_dom.1] {
        let f = psi.ctx_dom.embed(basis_cubic);
        let g = psi.apply(&f, tol)?;
        let g_bin = psi
            .ctx_cod
            .restrict(&g, 1e-6)
            .map_err(|e| lift_binary_error(e, i1))?;
        let coords =
            coords_in_basis(&g_bin, &l_cod, 1e-6).map_err(|e| lift_binary_error(e, i1))?;
        cols.push(alloc::vec![coords[0], coords[1]]);
    }
    let n = crate::linalg::CMat::from_cols(&cols);
    let m_cod_inv = m_cod.inverse().map_err(|e| lift_binary_error(e, i1))?;
    let theta = m_cod_inv.matrix().matmul(&n).matmul(m_dom.matrix());
    let map = ProjMap::new(
        theta,
        format!("perp(q{i})"),
        format!("perp(q{i1})"),
    );
    if map.det().norm() <= 1e-12 {
        return Err(ThetaError::FrameFitFailed);
    }
    Ok(map)
}

/// Builds theta_i for a quartic with vanishing mixed triple derivative,
/// computing the complement bases locally.
pub fn build_theta(
    f: &HomogeneousForm,
    frame: &Frame,
    i: usize,
    tol: &Tolerances,
) -> Result<ProjMap, ThetaError> {
    let i2 = next_index(next_index(i));
    let c = apolar_apply(frame.x(i2).form(), f);
    let psi = PsiContext::new(c, frame, i, tol)?;
    let perp_dom = quadric_perp(&psi.q_tail_bin).map_err(|e| lift_binary_error(e, i))?;
    let perp_cod =
        quadric_perp(&psi.q_head_bin).map_err(|e| lift_binary_error(e, next_index(i)))?;
    theta_from_psi(&psi, &perp_dom, &perp_cod, tol)
}

/// Assembles the full chain for a quartic annihilated by the frame's
/// triple operator: the three quadrics and contexts, the three theta maps
/// over shared complement bases, the composition, and its fixed points.
///
/// Panics when the mixed triple derivative of `f` is not numerically zero.
pub fn build_chain(
    f: &HomogeneousForm,
    frame: &Frame,
    tol: &Tolerances,
) -> Result<ThetaChain, ThetaError> {
    assert_eq!(f.degree(), 4, "chains are built for quartics");
    assert_eq!(f.nvars(), 3);
    let triple = frame.triple_operator();
    let harmonic_defect = apolar_apply(&triple, f).max_norm();
    let f_scale = 24.0 * f.max_norm() * triple.max_norm();
    assert!(
        harmonic_defect <= 1e-6 * f_scale.max(1e-300),
        "mixed triple derivative of f does not vanish for this frame"
    );

    let contexts = [frame.context(0), frame.context(1), frame.context(2)];
    let mut q_bin: Vec<HomogeneousForm> = Vec::with_capacity(3);
    for (i, ctx) in contexts.iter().enumerate() {
        let op = frame.pair_operator(i);
        let q = apolar_apply(&op, f);
        let scale = 12.0 * f.max_norm() * op.max_norm();
        if q.max_norm() <= tol.zero * scale.max(1e-300) {
            return Err(ThetaError::QZero { index: i });
        }
        let qb = ctx
            .restrict(&q, tol.zero)
            .map_err(|e| lift_binary_error(e, i))?;
        if is_square(&qb, tol.zero).map_err(|e| lift_binary_error(e, i))? {
            return Err(ThetaError::QSquare { index: i });
        }
        q_bin.push(qb);
    }
    let mut perp: Vec<(HomogeneousForm, HomogeneousForm)> = Vec::with_capacity(3);
    for (i, qb) in q_bin.iter().enumerate() {
        perp.push(quadric_perp(qb).map_err(|e| lift_binary_error(e, i))?);
    }
    let mut theta: Vec<ProjMap> = Vec::with_capacity(3);
    for i in 0..3 {
        let i1 = next_index(i);
        let i2 = next_index(i1);
        let c = apolar_apply(frame.x(i2).form(), f);
        let psi = PsiContext::new(c, frame, i, tol)?;
        theta.push(theta_from_psi(&psi, &perp[i], &perp[i1], tol)?);
    }
    let composite = theta[2].compose(&theta[1]).compose(&theta[0]);
    let fixed = fixed_points(&composite, PARABOLIC_TOL)?;
    let closure: Vec<f64> = fixed
        .points
        .iter()
        .map(|p| {
            let around = theta[2].apply(&theta[1].apply(&theta[0].apply(p)));
            around.distance(p)
        })
        .collect();
    let q_bin: [HomogeneousForm; 3] = q_bin.try_into().expect("three quadrics");
    let perp: [(HomogeneousForm, HomogeneousForm); 3] = perp.try_into().expect("three bases");
    let theta: [ProjMap; 3] = theta.try_into().expect("three maps");
    Ok(ThetaChain {
        frame: frame.clone(),
        contexts,
        q_bin,
        perp,
        theta,
        composite,
        fixed,
        closure,
    })
}
