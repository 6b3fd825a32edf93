//! Frames of dual directions and the binary-form geometry living inside
//! them: restriction to the two-variable subrings, the correspondence
//! between a quadric's orthogonal complement and the cubics it determines,
//! roots of dual quadratics, and sum-of-squares coefficients.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{proj_distance_2, CMat, LinalgError};
use crate::poly::{
    apolar_matrix, monomial_exponents, multiply, power_of_linear, HomogeneousForm, LinearForm,
    Scalar, Side,
};
use crate::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub enum BinaryError {
    /// The three dual forms of a frame are numerically dependent.
    DegenerateFrame { det_rel: f64 },
    /// An operation received a numerically zero form.
    ZeroForm,
    /// The form to restrict is not annihilated by the context's operator.
    NotInKernel { residual: f64 },
    /// The defining nullspace does not have the expected dimension.
    OmegaDegenerate { nullity: usize },
    /// The three fitted images are not in projective general position.
    FrameFitFailed,
    /// The two directions span the same projective point.
    CollinearDirections,
    /// A least-squares fit left a residual above tolerance.
    InconsistentSystem { residual: f64 },
}

impl fmt::Display for BinaryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BinaryError::DegenerateFrame { det_rel } => {
                write!(f, "frame determinant too small (relative {det_rel:.3e})")
            }
            BinaryError::ZeroForm => write!(f, "form is numerically zero"),
            BinaryError::NotInKernel { residual } => {
                write!(f, "form not in the context kernel (residual {residual:.3e})")
            }
            BinaryError::OmegaDegenerate { nullity } => {
                write!(f, "defining system has nullity {nullity}, expected 1")
            }
            BinaryError::FrameFitFailed => {
                write!(f, "projective frame fit failed: images not in general position")
            }
            BinaryError::CollinearDirections => {
                write!(f, "directions coincide projectively")
            }
            BinaryError::InconsistentSystem { residual } => {
                write!(f, "inconsistent linear system (residual {residual:.3e})")
            }
        }
    }
}

impl core::error::Error for BinaryError {}

/// Cyclic successor of an index modulo 3.
pub fn next_index(i: usize) -> usize {
    (i + 1) % 3
}

/// Three independent dual directions and the primal basis dual to them.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    x: [LinearForm; 3],
    v: [LinearForm; 3],
}

impl Frame {
    /// Builds a frame from three dual linear forms, deriving the primal
    /// directions `v_j` with `x^i(v_j) = delta_ij`.
    pub fn new(
        x0: LinearForm,
        x1: LinearForm,
        x2: LinearForm,
        zero_tol: f64,
    ) -> Result<Self, BinaryError> {
        let x = [x0, x1, x2];
        for xi in &x {
            assert_eq!(xi.side(), Side::Dual, "frame directions must be dual");
            assert_eq!(xi.nvars(), 3, "frame directions must be ternary");
        }
        let m = CMat::from_rows(&[
            x[0].coeffs().to_vec(),
            x[1].coeffs().to_vec(),
            x[2].coeffs().to_vec(),
        ]);
        // Hadamard bound keeps the determinant test scale-free
        let mut bound = 1.0;
        for i in 0..3 {
            let row = m.row(i);
            let n = row.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if n == 0.0 {
                return Err(BinaryError::DegenerateFrame { det_rel: 0.0 });
            }
            bound *= n;
        }
        let det = det3(&m);
        let det_rel = det.norm() / bound;
        if det_rel <= zero_tol {
            return Err(BinaryError::DegenerateFrame { det_rel });
        }
        let inv = m.inverse().map_err(|e| match e {
            LinalgError::Singular => BinaryError::DegenerateFrame { det_rel },
            other => panic!("unexpected inversion failure: {other}"),
        })?;
        let mk_v = |j: usize| LinearForm::from_coeffs(Side::Primal, &inv.col(j));
        let v = [mk_v(0), mk_v(1), mk_v(2)];
        Ok(Frame { x, v })
    }

    /// The coordinate frame `(X0, X1, X2)` with `v_i = y_i`.
    pub fn standard() -> Self {
        let x = |i| LinearForm::variable(Side::Dual, 3, i);
        Frame::new(x(0), x(1), x(2), 1e-9).expect("standard frame is nondegenerate")
    }

    pub fn x(&self, i: usize) -> &LinearForm {
        &self.x[i]
    }

    pub fn v(&self, i: usize) -> &LinearForm {
        &self.v[i]
    }

    /// The degree-3 operator `x^0 x^1 x^2`.
    pub fn triple_operator(&self) -> HomogeneousForm {
        let p = multiply(self.x[0].form(), self.x[1].form());
        multiply(&p, self.x[2].form())
    }

    /// The degree-2 operator `x^{i'} x^{i''}`.
    pub fn pair_operator(&self, i: usize) -> HomogeneousForm {
        let i1 = next_index(i);
        let i2 = next_index(i1);
        multiply(self.x[i1].form(), self.x[i2].form())
    }

    pub fn context(&self, i: usize) -> BinaryContext {
        BinaryContext::new(self, i)
    }
}

fn det3(m: &CMat) -> Scalar {
    m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
        - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
        + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
}

/// The two-variable world attached to frame index `i`: ternary forms
/// annihilated by `x^i`, coordinatized by the primal basis
/// `(v_{i'}, v_{i''})` and the dual basis `(x^{i'}, x^{i''})` taken modulo
/// `x^i`. Binary forms here use those bases, first variable `v_{i'}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryContext {
    index: usize,
    x_op: LinearForm,
    basis: [LinearForm; 2],
    dual_basis: [LinearForm; 2],
}

impl BinaryContext {
    pub fn new(frame: &Frame, i: usize) -> Self {
        assert!(i < 3, "context index out of range");
        let i1 = next_index(i);
        let i2 = next_index(i1);
        BinaryContext {
            index: i,
            x_op: frame.x(i).clone(),
            basis: [frame.v(i1).clone(), frame.v(i2).clone()],
            dual_basis: [frame.x(i1).clone(), frame.x(i2).clone()],
        }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// Primal basis vector (0 → `v_{i'}`, 1 → `v_{i''}`).
    pub fn basis(&self, k: usize) -> &LinearForm {
        &self.basis[k]
    }

    /// Canonical dual-basis representative (0 → `x^{i'}`, 1 → `x^{i''}`).
    pub fn dual(&self, k: usize) -> &LinearForm {
        &self.dual_basis[k]
    }

    /// The annihilating operator `x^i` of this context.
    pub fn operator(&self) -> &LinearForm {
        &self.x_op
    }

    /// Matrix whose column `a` holds the ternary coefficients of the
    /// embedded binary monomial of exponent `[d-a-index]`, i.e. the basis
    /// monomials in graded-lex order.
    fn embed_matrix(&self, degree: usize, primal: bool) -> CMat {
        let (b0, b1) = if primal {
            (&self.basis[0], &self.basis[1])
        } else {
            (&self.dual_basis[0], &self.dual_basis[1])
        };
        let cols: Vec<Vec<Scalar>> = monomial_exponents(2, degree)
            .iter()
            .map(|e| {
                let p0 = power_of_linear_any(b0, e[0] as usize);
                let p1 = power_of_linear_any(b1, e[1] as usize);
                multiply(&p0, &p1).coeffs().to_vec()
            })
            .collect();
        CMat::from_cols(&cols)
    }

    /// Binary form (in this context's bases) to ternary form.
    pub fn embed(&self, b: &HomogeneousForm) -> HomogeneousForm {
        assert_eq!(b.nvars(), 2, "embed takes binary forms");
        let primal = b.side() == Side::Primal;
        let m = self.embed_matrix(b.degree(), primal);
        let coeffs = m.matvec(b.coeffs());
        HomogeneousForm::new(b.side(), 3, b.degree(), coeffs).expect("valid embedding")
    }

    /// Ternary form annihilated by `x^i` to binary coordinates.
    pub fn restrict(
        &self,
        form: &HomogeneousForm,
        zero_tol: f64,
    ) -> Result<HomogeneousForm, BinaryError> {
        assert_eq!(form.nvars(), 3, "restrict takes ternary forms");
        assert_eq!(form.side(), Side::Primal, "restrict takes primal forms");
        let m = self.embed_matrix(form.degree(), true);
        let b = m.lstsq(form.coeffs(), 1e-13);
        let back = m.matvec(&b);
        let scale = form.max_norm();
        let residual = back
            .iter()
            .zip(form.coeffs())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        let rel = if scale > 0.0 { residual / scale } else { 0.0 };
        if rel > zero_tol {
            return Err(BinaryError::NotInKernel { residual: rel });
        }
        Ok(HomogeneousForm::new(Side::Primal, 2, form.degree(), b).expect("valid restriction"))
    }

    /// Binary coordinates `[s:t]` to the ternary direction
    /// `s v_{i'} + t v_{i''}`.
    pub fn embed_point(&self, p: &ProjPoint) -> LinearForm {
        let c = p.coords();
        let f = &self.basis[0].form().scaled(c[0]) + &self.basis[1].form().scaled(c[1]);
        LinearForm::new(f).expect("degree 1 is preserved")
    }
}

/// `v^d` for any side (degree 0 gives the constant 1).
fn power_of_linear_any(v: &LinearForm, d: usize) -> HomogeneousForm {
    if v.side() == Side::Primal {
        return power_of_linear(v, d);
    }
    let mut acc = HomogeneousForm::monomial(Side::Dual, v.nvars(), 0, [0, 0, 0], Scalar::ONE);
    for _ in 0..d {
        acc = multiply(&acc, v.form());
    }
    acc
}

/// A point of a projective line, stored with its maximum-modulus coordinate
/// normalized to exactly 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjPoint {
    coords: [Scalar; 2],
}

impl ProjPoint {
    pub fn new(coords: [Scalar; 2]) -> Self {
        let n0 = coords[0].norm();
        let n1 = coords[1].norm();
        assert!(n0 > 0.0 || n1 > 0.0, "projective point needs a nonzero coordinate");
        let pivot = if n0 >= n1 { coords[0] } else { coords[1] };
        let c = [coords[0] / pivot, coords[1] / pivot];
        ProjPoint { coords: c }
    }

    pub fn coords(&self) -> &[Scalar; 2] {
        &self.coords
    }

    pub fn distance(&self, other: &ProjPoint) -> f64 {
        proj_distance_2(&self.coords, &other.coords)
    }
}

/// An automorphism of a projective line: a 2x2 matrix stored up to scale,
/// Frobenius-normalized with its largest entry rotated to positive real
/// phase, plus names for the bases its coordinates refer to.
#[derive(Debug, Clone)]
pub struct ProjMap {
    matrix: CMat,
    pub domain_basis: String,
    pub codomain_basis: String,
}

impl ProjMap {
    pub fn new(matrix: CMat, domain_basis: String, codomain_basis: String) -> Self {
        assert_eq!(matrix.rows(), 2);
        assert_eq!(matrix.cols(), 2);
        let fro = matrix.frobenius_norm();
        assert!(fro > 0.0, "projective map needs a nonzero matrix");
        let mut m = matrix.scaled(Scalar::new(1.0 / fro, 0.0));
        // rotate so the largest entry is real positive, fixing the scale class
        let mut best = (0usize, 0usize);
        let mut best_norm = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let n = m[(i, j)].norm();
                if n > best_norm {
                    best_norm = n;
                    best = (i, j);
                }
            }
        }
        let phase = m[best] / best_norm;
        m = m.scaled(phase.conj());
        ProjMap {
            matrix: m,
            domain_basis,
            codomain_basis,
        }
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn det(&self) -> Scalar {
        self.matrix[(0, 0)] * self.matrix[(1, 1)] - self.matrix[(0, 1)] * self.matrix[(1, 0)]
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        let c = p.coords();
        let out = self.matrix.matvec(&[c[0], c[1]]);
        ProjPoint::new([out[0], out[1]])
    }

    /// `self` after `other` (matrix product `self * other`).
    pub fn compose(&self, other: &ProjMap) -> ProjMap {
        ProjMap::new(
            self.matrix.matmul(&other.matrix),
            other.domain_basis.clone(),
            self.codomain_basis.clone(),
        )
    }

    pub fn inverse(&self) -> Result<ProjMap, BinaryError> {
        let inv = self
            .matrix
            .inverse()
            .map_err(|_| BinaryError::FrameFitFailed)?;
        Ok(ProjMap::new(
            inv,
            self.codomain_basis.clone(),
            self.domain_basis.clone(),
        ))
    }
}

/// Apolarity pairing weights for binary quadratics: `<B^a, b^a> = a0! a1!`.
const QUAD_WEIGHTS: [f64; 3] = [2.0, 1.0, 2.0];

/// Bilinear pairing of a dual and a primal binary quadratic.
pub fn pair_quadratics(h: &HomogeneousForm, q: &HomogeneousForm) -> Scalar {
    assert_eq!(h.side(), Side::Dual);
    assert_eq!(q.side(), Side::Primal);
    assert!(h.nvars() == 2 && q.nvars() == 2 && h.degree() == 2 && q.degree() == 2);
    h.coeffs()
        .iter()
        .zip(q.coeffs())
        .zip(QUAD_WEIGHTS)
        .map(|((a, b), w)| a * b * w)
        .sum()
}

/// Whether a binary quadratic is the square of a linear form:
/// the discriminant `b^2 - 4ac` is below `tol` relative to the squared
/// coefficient scale.
pub fn is_square(q: &HomogeneousForm, tol: f64) -> Result<bool, BinaryError> {
    assert_eq!(q.side(), Side::Primal, "is_square takes primal quadratics");
    assert!(q.nvars() == 2 && q.degree() == 2);
    let c = q.coeffs();
    let scale = q.max_norm();
    if scale == 0.0 {
        return Err(BinaryError::ZeroForm);
    }
    let disc = c[1] * c[1] - 4.0 * c[0] * c[2];
    Ok(disc.norm() <= tol * scale * scale)
}

/// Relative discriminant `|b^2 - 4ac| / scale^2` of a binary quadratic.
pub fn relative_discriminant(q: &HomogeneousForm) -> Result<f64, BinaryError> {
    assert!(q.nvars() == 2 && q.degree() == 2);
    let c = q.coeffs();
    let scale = q.max_norm();
    if scale == 0.0 {
        return Err(BinaryError::ZeroForm);
    }
    let disc = c[1] * c[1] - 4.0 * c[0] * c[2];
    Ok(disc.norm() / (scale * scale))
}

/// Orthonormal basis `(h_a, h_b)` of the dual quadratics pairing to zero
/// with `q`.
pub fn quadric_perp(
    q: &HomogeneousForm,
) -> Result<(HomogeneousForm, HomogeneousForm), BinaryError> {
    assert_eq!(q.side(), Side::Primal);
    assert!(q.nvars() == 2 && q.degree() == 2);
    if q.max_norm() == 0.0 {
        return Err(BinaryError::ZeroForm);
    }
    let row: Vec<Scalar> = q
        .coeffs()
        .iter()
        .zip(QUAD_WEIGHTS)
        .map(|(c, w)| c * w)
        .collect();
    let m = CMat::from_rows(&[row]);
    let ns = m.nullspace(1e-12);
    assert_eq!(ns.len(), 2, "a nonzero 1x3 system has a 2-dim nullspace");
    let mk = |v: &Vec<Scalar>| {
        HomogeneousForm::new(Side::Dual, 2, 2, v.clone()).expect("valid dual quadratic")
    };
    Ok((mk(&ns[0]), mk(&ns[1])))
}

/// Pairing row enforcing `<h, d_x F> = 0` on binary cubics: the 1x4 vector
/// `(w . h)^T M_x` where `M_x` is the apolarity matrix of `x` on cubics.
fn quotient_row(h: &HomogeneousForm, mx: &CMat) -> Vec<Scalar> {
    let wh: Vec<Scalar> = h
        .coeffs()
        .iter()
        .zip(QUAD_WEIGHTS)
        .map(|(c, w)| c * w)
        .collect();
    (0..mx.cols())
        .map(|j| (0..3).map(|r| wh[r] * mx[(r, j)]).sum())
        .collect()
}

/// Orthonormal basis of `L`: binary cubics `F` with `d_x F` proportional
/// to `q`, computed from the perp basis of `q`.
pub fn l_space_basis(
    x: &LinearForm,
    perp: &(HomogeneousForm, HomogeneousForm),
) -> Result<(HomogeneousForm, HomogeneousForm), BinaryError> {
    assert_eq!(x.side(), Side::Dual);
    assert_eq!(x.nvars(), 2);
    let mx = apolar_matrix(x.form(), 3);
    let m = CMat::from_rows(&[quotient_row(&perp.0, &mx), quotient_row(&perp.1, &mx)]);
    let ns = m.nullspace(1e-9);
    if ns.len() != 2 {
        return Err(BinaryError::OmegaDegenerate { nullity: ns.len() });
    }
    let mk =
        |v: &Vec<Scalar>| HomogeneousForm::new(Side::Primal, 2, 3, v.clone()).expect("valid cubic");
    Ok((mk(&ns[0]), mk(&ns[1])))
}

/// The cubic `F`, unique up to scale, with `d_h F = 0` and `d_x F`
/// proportional to `q`; computed as the one-dimensional nullspace of the
/// stacked 4x4 system and normalized to unit maximum coefficient.
pub fn omega_point(
    q: &HomogeneousForm,
    x: &LinearForm,
    h: &HomogeneousForm,
    tol: &Tolerances,
) -> Result<HomogeneousForm, BinaryError> {
    assert_eq!(q.side(), Side::Primal);
    assert_eq!(h.side(), Side::Dual);
    assert!(q.nvars() == 2 && h.nvars() == 2 && x.nvars() == 2);
    assert!(q.degree() == 2 && h.degree() == 2);
    let scale = h.max_norm() * q.max_norm();
    assert!(scale > 0.0, "omega_point needs nonzero q and h");
    let pairing = pair_quadratics(h, q).norm();
    assert!(
        pairing <= 1e-6 * 2.0 * scale,
        "h is not in the orthogonal complement of q (pairing {pairing:.3e})"
    );
    let perp = quadric_perp(q)?;
    let mh = apolar_matrix(h, 3);
    let mx = apolar_matrix(x.form(), 3);
    let m = CMat::from_rows(&[
        mh.row(0),
        mh.row(1),
        quotient_row(&perp.0, &mx),
        quotient_row(&perp.1, &mx),
    ]);
    let ns = m.nullspace(tol.zero);
    if ns.len() != 1 {
        return Err(BinaryError::OmegaDegenerate { nullity: ns.len() });
    }
    let f = HomogeneousForm::new(Side::Primal, 2, 3, ns[0].clone()).expect("valid cubic");
    Ok(f.normalized_max().0)
}

/// Hermitian-orthonormal-basis coordinates of `f` in span(basis), checked to
/// reconstruct `f` within `guard` relative error.
pub(crate) fn coords_in_basis(
    f: &HomogeneousForm,
    basis: &(HomogeneousForm, HomogeneousForm),
    guard: f64,
) -> Result<[Scalar; 2], BinaryError> {
    let dot = |b: &HomogeneousForm| -> Scalar {
        b.coeffs()
            .iter()
            .zip(f.coeffs())
            .map(|(x, y)| x.conj() * y)
            .sum()
    };
    let c = [dot(&basis.0), dot(&basis.1)];
    let rec = &basis.0.scaled(c[0]) + &basis.1.scaled(c[1]);
    let scale = f.max_norm();
    let rel = if scale > 0.0 {
        (&rec - f).max_norm() / scale
    } else {
        0.0
    };
    if rel > guard {
        return Err(BinaryError::InconsistentSystem { residual: rel });
    }
    Ok(c)
}

/// The 2x2 matrix of the correspondence `h -> F_h` in the given bases,
/// recovered by the three-point projective frame fit on `h_a`, `h_b`,
/// `h_a + h_b`.
pub fn omega_map(
    q: &HomogeneousForm,
    x: &LinearForm,
    perp: &(HomogeneousForm, HomogeneousForm),
    l_basis: &(HomogeneousForm, HomogeneousForm),
    tol: &Tolerances,
) -> Result<ProjMap, BinaryError> {
    let image_coords = |h: &HomogeneousForm| -> Result<[Scalar; 2], BinaryError> {
        let f = omega_point(q, x, h, tol)?;
        coords_in_basis(&f, l_basis, 1e-6)
    };
    let a = image_coords(&perp.0)?;
    let b = image_coords(&perp.1)?;
    let ab = image_coords(&(&perp.0 + &perp.1))?;
    frame_fit(&a, &b, &ab).map(|m| {
        ProjMap::new(
            m,
            String::from("perp(q)"),
            String::from("L(q,x)"),
        )
    })
}

/// Solves the three-point fit: returns `[alpha a | beta b]` with
/// `alpha a + beta b = ab`.
pub(crate) fn frame_fit(
    a: &[Scalar; 2],
    b: &[Scalar; 2],
    ab: &[Scalar; 2],
) -> Result<CMat, BinaryError> {
    let m = CMat::from_cols(&[a.to_vec(), b.to_vec()]);
    let sol = m
        .solve(&[ab[0], ab[1]])
        .map_err(|_| BinaryError::FrameFitFailed)?;
    let norm_a = (a[0].norm_sqr() + a[1].norm_sqr()).sqrt();
    let norm_b = (b[0].norm_sqr() + b[1].norm_sqr()).sqrt();
    let norm_ab = (ab[0].norm_sqr() + ab[1].norm_sqr()).sqrt();
    // alpha, beta of roundoff size mean the third image sits on an axis
    if sol[0].norm() * norm_a <= 1e-9 * norm_ab || sol[1].norm() * norm_b <= 1e-9 * norm_ab {
        return Err(BinaryError::FrameFitFailed);
    }
    Ok(CMat::from_cols(&[
        vec![sol[0] * a[0], sol[0] * a[1]],
        vec![sol[1] * b[0], sol[1] * b[1]],
    ]))
}

/// The two roots of a dual binary quadratic, as points `[s:t]` with
/// `h(s,t) = A s^2 + B st + C t^2 = 0`.
#[derive(Debug, Clone)]
pub struct RootPair {
    pub first: ProjPoint,
    pub second: ProjPoint,
    /// Set when the discriminant is at roundoff scale: both points coincide.
    pub repeated: bool,
}

pub fn roots_of_dual_quadratic(
    h: &HomogeneousForm,
    zero_tol: f64,
) -> Result<RootPair, BinaryError> {
    assert_eq!(h.side(), Side::Dual, "roots are taken of dual quadratics");
    assert!(h.nvars() == 2 && h.degree() == 2);
    let c = h.coeffs();
    let (a, b, cc) = (c[0], c[1], c[2]);
    let scale = h.max_norm();
    if scale == 0.0 {
        return Err(BinaryError::ZeroForm);
    }
    let disc = b * b - 4.0 * a * cc;
    let mut sq = disc.sqrt();
    // pick the square-root sign that avoids cancellation in b + sq
    if (b.conj() * sq).re < 0.0 {
        sq = -sq;
    }
    let qq = -(b + sq) / 2.0;
    // roots s/t = qq/a and cc/qq; at most one candidate can collapse
    let mut r1 = [qq, a];
    let mut r2 = [cc, qq];
    let tiny = 1e-14 * scale;
    let norm2 = |v: &[Scalar; 2]| (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    if norm2(&r1) <= tiny {
        r1 = r2;
    } else if norm2(&r2) <= tiny {
        r2 = r1;
    }
    let repeated = disc.norm() <= zero_tol * scale * scale;
    Ok(RootPair {
        first: ProjPoint::new(r1),
        second: ProjPoint::new(r2),
        repeated,
    })
}

/// Evaluation of a dual binary quadratic at projective coordinates.
pub fn eval_dual_quadratic(h: &HomogeneousForm, p: &ProjPoint) -> Scalar {
    let c = h.coeffs();
    let [s, t] = *p.coords();
    c[0] * s * s + c[1] * s * t + c[2] * t * t
}

/// The unique `(alpha, beta)` with `q = alpha u^2 + beta w^2`, for
/// projectively distinct binary directions `u`, `w`.
pub fn sum_of_squares_coeffs(
    q: &HomogeneousForm,
    u: &LinearForm,
    w: &LinearForm,
    tol: &Tolerances,
) -> Result<(Scalar, Scalar), BinaryError> {
    assert!(q.nvars() == 2 && q.degree() == 2 && q.side() == Side::Primal);
    assert!(u.nvars() == 2 && w.nvars() == 2);
    let uc = [u.coeffs()[0], u.coeffs()[1]];
    let wc = [w.coeffs()[0], w.coeffs()[1]];
    if proj_distance_2(&uc, &wc) <= tol.zero {
        return Err(BinaryError::CollinearDirections);
    }
    let u2 = power_of_linear(u, 2);
    let w2 = power_of_linear(w, 2);
    let m = CMat::from_cols(&[u2.coeffs().to_vec(), w2.coeffs().to_vec()]);
    let sol = m.lstsq(q.coeffs(), 1e-13);
    let rec = m.matvec(&sol);
    let scale = q.max_norm();
    let residual = rec
        .iter()
        .zip(q.coeffs())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
        / scale.max(1e-300);
    if residual > tol.verify {
        return Err(BinaryError::InconsistentSystem { residual });
    }
    Ok((sol[0], sol[1]))
}

/// Scaled basis combination `p0 h_a + p1 h_b`.
pub fn combine(basis: &(HomogeneousForm, HomogeneousForm), p: &ProjPoint) -> HomogeneousForm {
    let c = p.coords();
    &basis.0.scaled(c[0]) + &basis.1.scaled(c[1])
}

#[allow(dead_code)]
fn basis_label(i: usize) -> String {
    format!("perp(q{i})")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{apolar_apply, evaluate_dual, rel_distance};

    fn c(re: f64) -> Scalar {
        Scalar::new(re, 0.0)
    }

    fn ci(re: f64, im: f64) -> Scalar {
        Scalar::new(re, im)
    }

    fn lin(side: Side, coeffs: &[f64]) -> LinearForm {
        let v: Vec<Scalar> = coeffs.iter().map(|&x| c(x)).collect();
        LinearForm::from_coeffs(side, &v)
    }

    fn bform(side: Side, degree: usize, coeffs: &[f64]) -> HomogeneousForm {
        let v: Vec<Scalar> = coeffs.iter().map(|&x| c(x)).collect();
        HomogeneousForm::new(side, 2, degree, v).expect("valid binary form")
    }

    const TOL: Tolerances = Tolerances::new(1e-9, 1e-8);

    #[test]
    fn standard_frame_dual_bases() {
        let fr = Frame::standard();
        for i in 0..3 {
            for j in 0..3 {
                let val = evaluate_dual(fr.x(i).form(), fr.v(j));
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((val - c(expect)).norm() < 1e-12);
            }
            assert!(rel_distance(
                fr.v(i).form(),
                LinearForm::variable(Side::Primal, 3, i).form()
            ) < 1e-14);
        }
    }

    #[test]
    fn cyclic_frame_dual_basis() {
        // x0 = X0+X1, x1 = X1+X2, x2 = X2+X0 gives v0 = (y0+y1-y2)/2
        let fr = Frame::new(
            lin(Side::Dual, &[1.0, 1.0, 0.0]),
            lin(Side::Dual, &[0.0, 1.0, 1.0]),
            lin(Side::Dual, &[1.0, 0.0, 1.0]),
            1e-9,
        )
        .expect("independent triple");
        let v0 = lin(Side::Primal, &[0.5, 0.5, -0.5]);
        assert!(rel_distance(fr.v(0).form(), v0.form()) < 1e-12);
        for i in 0..3 {
            for j in 0..3 {
                let val = evaluate_dual(fr.x(i).form(), fr.v(j));
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((val - c(expect)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn degenerate_frame_rejected() {
        let err = Frame::new(
            lin(Side::Dual, &[1.0, 0.0, 0.0]),
            lin(Side::Dual, &[0.0, 1.0, 0.0]),
            lin(Side::Dual, &[1.0, 1.0, 0.0]),
            1e-9,
        );
        assert!(matches!(err, Err(BinaryError::DegenerateFrame { .. })));
    }

    #[test]
    fn restrict_and_embed_roundtrip() {
        let fr = Frame::standard();
        let ctx = fr.context(0);
        // y1^2 y2 restricts to b0^2 b1 (basis v1, v2)
        let f = HomogeneousForm::monomial(Side::Primal, 3, 3, [0, 2, 1], c(1.0));
        let b = ctx.restrict(&f, 1e-9).expect("in kernel");
        let expected = bform(Side::Primal, 3, &[0.0, 1.0, 0.0, 0.0]);
        assert!(rel_distance(&b, &expected) < 1e-12);
        let back = ctx.embed(&b);
        assert!(rel_distance(&back, &f) < 1e-12);
    }

    #[test]
    fn restrict_rejects_nonkernel() {
        let fr = Frame::standard();
        let ctx = fr.context(0);
        let f = HomogeneousForm::monomial(Side::Primal, 3, 3, [1, 2, 0], c(1.0));
        assert!(matches!(
            ctx.restrict(&f, 1e-9),
            Err(BinaryError::NotInKernel { .. })
        ));
    }

    #[test]
    fn embed_dual_representative() {
        // context 1 of the standard frame has dual basis (x^2, x^0)
        let fr = Frame::standard();
        let ctx = fr.context(1);
        let b = bform(Side::Dual, 2, &[0.0, 1.0, 0.0]);
        let t = ctx.embed(&b);
        let expected = HomogeneousForm::monomial(Side::Dual, 3, 2, [1, 0, 1], c(1.0));
        assert!(rel_distance(&t, &expected) < 1e-12);
    }

    #[test]
    fn embed_point_into_plane() {
        let fr = Frame::standard();
        let ctx = fr.context(2);
        // basis of context 2 is (v0, v1) = (y0, y1)
        let p = ProjPoint::new([c(2.0), c(-1.0)]);
        let v = ctx.embed_point(&p);
        let expected = lin(Side::Primal, &[1.0, -0.5, 0.0]);
        assert!(rel_distance(v.form(), expected.form()) < 1e-12);
    }

    #[test]
    fn proj_point_normalization() {
        let p = ProjPoint::new([ci(0.0, 2.0), c(1.0)]);
        assert!((p.coords()[0] - c(1.0)).norm() < 1e-15);
        assert!((p.coords()[1] - ci(0.0, -0.5)).norm() < 1e-15);
        let again = ProjPoint::new(*p.coords());
        assert!(p.distance(&again) < 1e-15);
    }

    #[test]
    fn is_square_examples() {
        let sq = bform(Side::Primal, 2, &[1.0, 2.0, 1.0]);
        assert_eq!(is_square(&sq, 1e-9), Ok(true));
        let not = bform(Side::Primal, 2, &[1.0, 0.0, 1.0]);
        assert_eq!(is_square(&not, 1e-9), Ok(false));
        let coeffs = vec![c(1.0), c(2.0 * (1.0 + 1e-12)), c(1.0)];
        let nearly = HomogeneousForm::new(Side::Primal, 2, 2, coeffs).unwrap();
        assert_eq!(is_square(&nearly, 1e-9), Ok(true));
        let zero = HomogeneousForm::zero(Side::Primal, 2, 2);
        assert_eq!(is_square(&zero, 1e-9), Err(BinaryError::ZeroForm));
    }

    #[test]
    fn quadric_perp_pairs_to_zero() {
        let q = bform(Side::Primal, 2, &[0.0, 1.0, 0.0]);
        let (ha, hb) = quadric_perp(&q).expect("nonzero");
        for h in [&ha, &hb] {
            assert!(pair_quadratics(h, &q).norm() < 1e-12);
            // the b0 b1 pairing slot must vanish: span is {B0^2, B1^2}
            assert!(h.coeffs()[1].norm() < 1e-12);
        }
        let qq = bform(Side::Primal, 2, &[1.0, 0.0, 0.0]);
        let (ka, kb) = quadric_perp(&qq).expect("nonzero");
        for h in [&ka, &kb] {
            assert!(pair_quadratics(h, &qq).norm() < 1e-12);
            assert!(h.coeffs()[0].norm() < 1e-12);
        }
    }

    #[test]
    fn omega_point_circle_example() {
        // q = b0^2 + b1^2, x = B1, h = B0 B1: the defining conditions force
        // F proportional to b0^3
        let q = bform(Side::Primal, 2, &[1.0, 0.0, 1.0]);
        let x = lin(Side::Dual, &[0.0, 1.0]);
        let h = bform(Side::Dual, 2, &[0.0, 1.0, 0.0]);
        let f = omega_point(&q, &x, &h, &TOL).expect("nondegenerate");
        let expected = bform(Side::Primal, 3, &[1.0, 0.0, 0.0, 0.0]);
        assert!(rel_distance(&f, &expected) < 1e-9);
        // defining conditions
        let dh = apolar_apply(&h, &f);
        assert!(dh.max_norm() < 1e-10);
        let dx = apolar_apply(x.form(), &f);
        let (pa, pb) = quadric_perp(&q).unwrap();
        assert!(pair_quadratics(&pa, &dx).norm() < 1e-10);
        assert!(pair_quadratics(&pb, &dx).norm() < 1e-10);
    }

    #[test]
    fn omega_point_square_degenerates() {
        let q = bform(Side::Primal, 2, &[1.0, 0.0, 0.0]);
        let x = lin(Side::Dual, &[0.0, 1.0]);
        // h = B1^2 lies in the perp of b0^2
        let h = bform(Side::Dual, 2, &[0.0, 0.0, 1.0]);
        match omega_point(&q, &x, &h, &TOL) {
            Err(BinaryError::OmegaDegenerate { nullity }) => assert_ne!(nullity, 1),
            other => panic!("expected OmegaDegenerate, got {other:?}"),
        }
    }

    #[test]
    #[should_panic(expected = "not in the orthogonal complement")]
    fn omega_point_rejects_bad_h() {
        let q = bform(Side::Primal, 2, &[1.0, 0.0, 1.0]);
        let x = lin(Side::Dual, &[0.0, 1.0]);
        let h = bform(Side::Dual, 2, &[1.0, 0.0, 1.0]);
        let _ = omega_point(&q, &x, &h, &TOL);
    }

    #[test]
    fn omega_map_consistent_with_pointwise() {
        let q = bform(Side::Primal, 2, &[1.0, 3.0, -1.0]);
        let x = lin(Side::Dual, &[1.0, 0.5]);
        let perp = quadric_perp(&q).expect("nonzero");
        let l_basis = l_space_basis(&x, &perp).expect("rank 2");
        let m = omega_map(&q, &x, &perp, &l_basis, &TOL).expect("fit succeeds");
        // fourth point not used in the fit
        let h4 = &perp.0 + &perp.1.scaled(c(2.0));
        let f4 = omega_point(&q, &x, &h4, &TOL).expect("nondegenerate");
        let c4 = coords_in_basis(&f4, &l_basis, 1e-6).expect("in span");
        let image = m.apply(&ProjPoint::new([c(1.0), c(2.0)]));
        let target = ProjPoint::new(c4);
        assert!(image.distance(&target) < 1e-9, "distance {}", image.distance(&target));
        // basis points map to their images too
        let fa = omega_point(&q, &x, &perp.0, &TOL).unwrap();
        let ca = coords_in_basis(&fa, &l_basis, 1e-6).unwrap();
        let ia = m.apply(&ProjPoint::new([c(1.0), c(0.0)]));
        assert!(ia.distance(&ProjPoint::new(ca)) < 1e-9);
    }

    #[test]
    fn roots_examples() {
        let tol = 1e-9;
        // B0^2 - B1^2: roots [1:1], [1:-1]
        let h = bform(Side::Dual, 2, &[1.0, 0.0, -1.0]);
        let r = roots_of_dual_quadratic(&h, tol).expect("nonzero");
        assert!(!r.repeated);
        let p1 = ProjPoint::new([c(1.0), c(1.0)]);
        let p2 = ProjPoint::new([c(1.0), c(-1.0)]);
        let d = r.first.distance(&p1).min(r.first.distance(&p2));
        assert!(d < 1e-12);
        assert!(r.first.distance(&r.second) > 0.5);

        // B0 B1: roots [1:0], [0:1]
        let h = bform(Side::Dual, 2, &[0.0, 1.0, 0.0]);
        let r = roots_of_dual_quadratic(&h, tol).expect("nonzero");
        let axes = [
            ProjPoint::new([c(1.0), c(0.0)]),
            ProjPoint::new([c(0.0), c(1.0)]),
        ];
        for root in [&r.first, &r.second] {
            let dmin = axes.iter().map(|a| root.distance(a)).fold(1.0, f64::min);
            assert!(dmin < 1e-12);
        }
        assert!(r.first.distance(&r.second) > 0.5);

        // B0^2 + B1^2: roots [1:i], [1:-i]
        let h = bform(Side::Dual, 2, &[1.0, 0.0, 1.0]);
        let r = roots_of_dual_quadratic(&h, tol).expect("nonzero");
        for root in [&r.first, &r.second] {
            assert!(eval_dual_quadratic(&h, root).norm() < 1e-12);
        }
        assert!(r.first.distance(&r.second) > 0.5);

        // repeated root
        let h = bform(Side::Dual, 2, &[1.0, 0.0, 0.0]);
        let r = roots_of_dual_quadratic(&h, tol).expect("nonzero");
        assert!(r.repeated);
        assert!(r.first.distance(&ProjPoint::new([c(0.0), c(1.0)])) < 1e-12);
        assert!(r.first.distance(&r.second) < 1e-12);
    }

    #[test]
    fn roots_satisfy_equation_generic() {
        let h = HomogeneousForm::new(
            Side::Dual,
            2,
            2,
            vec![ci(1.2, -0.3), ci(0.4, 2.0), ci(-0.9, 0.1)],
        )
        .unwrap();
        let r = roots_of_dual_quadratic(&h, 1e-9).expect("nonzero");
        for root in [&r.first, &r.second] {
            let val = eval_dual_quadratic(&h, root).norm();
            assert!(val < 1e-10 * h.max_norm());
        }
        assert!(!r.repeated);
    }

    #[test]
    fn sum_of_squares_examples() {
        let q = bform(Side::Primal, 2, &[1.0, 0.0, 1.0]);
        let (a, b) = sum_of_squares_coeffs(
            &q,
            &lin(Side::Primal, &[1.0, 0.0]),
            &lin(Side::Primal, &[0.0, 1.0]),
            &TOL,
        )
        .expect("independent");
        assert!((a - c(1.0)).norm() < 1e-12 && (b - c(1.0)).norm() < 1e-12);

        let q = bform(Side::Primal, 2, &[0.0, 1.0, 0.0]);
        let (a, b) = sum_of_squares_coeffs(
            &q,
            &lin(Side::Primal, &[1.0, 1.0]),
            &lin(Side::Primal, &[1.0, -1.0]),
            &TOL,
        )
        .expect("independent");
        assert!((a - c(0.25)).norm() < 1e-12 && (b - c(-0.25)).norm() < 1e-12);

        let err = sum_of_squares_coeffs(
            &q,
            &lin(Side::Primal, &[1.0, 1.0]),
            &lin(Side::Primal, &[2.0, 2.0]),
            &TOL,
        );
        assert_eq!(err, Err(BinaryError::CollinearDirections));

        let q = bform(Side::Primal, 2, &[1.0, 1.0, 0.0]);
        let err = sum_of_squares_coeffs(
            &q,
            &lin(Side::Primal, &[1.0, 0.0]),
            &lin(Side::Primal, &[0.0, 1.0]),
            &TOL,
        );
        assert!(matches!(err, Err(BinaryError::InconsistentSystem { .. })));
    }

    #[test]
    fn proj_map_normalization_deterministic() {
        let m = CMat::from_rows(&[vec![ci(0.0, 2.0), c(1.0)], vec![c(0.0), c(1.0)]]);
        let pm = ProjMap::new(m, String::from("a"), String::from("b"));
        // largest entry rotated to positive real
        assert!((pm.matrix().frobenius_norm() - 1.0).abs() < 1e-14);
        let top = pm.matrix()[(0, 0)];
        assert!(top.im.abs() < 1e-14 && top.re > 0.0);
    }
}
