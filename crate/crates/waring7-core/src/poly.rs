//! Dense homogeneous polynomial arithmetic in two or three variables over
//! complex scalars.
//!
//! Primal forms live in the symmetric algebra on the point variables, dual
//! forms in the algebra of constant-coefficient differential operators; the
//! two act on each other through [`apolar_apply`]. Coefficients are stored
//! densely, indexed by exponent multi-indices in graded-lexicographic order
//! with the first variable most significant (so for degree 2 in three
//! variables the order is `y0^2, y0*y1, y0*y2, y1^2, y1*y2, y2^2`).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Deref, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::linalg::CMat;

/// Complex double-precision scalar.
pub type Scalar = Complex64;

/// Whether a form is a polynomial (primal) or a differential operator (dual).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Primal,
    Dual,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Primal => write!(f, "primal"),
            Side::Dual => write!(f, "dual"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PolyError {
    /// Coefficient vector length does not match the monomial count.
    CoefficientCount { expected: usize, got: usize },
    /// A coefficient is NaN or infinite.
    NonFinite { index: usize },
    /// Unsupported number of variables (only 2 and 3 are handled).
    BadVariableCount { nvars: usize },
    /// The evaluation of the operator on some direction is numerically zero,
    /// so the relative antiderivative does not exist.
    AntiderivativeUndefined { term: usize },
    /// A decomposition term has a numerically zero direction.
    ZeroDirection { term: usize },
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::CoefficientCount { expected, got } => {
                write!(f, "expected {expected} coefficients, got {got}")
            }
            PolyError::NonFinite { index } => {
                write!(f, "non-finite coefficient at index {index}")
            }
            PolyError::BadVariableCount { nvars } => {
                write!(f, "unsupported number of variables: {nvars}")
            }
            PolyError::AntiderivativeUndefined { term } => {
                write!(f, "operator vanishes on direction of term {term}")
            }
            PolyError::ZeroDirection { term } => {
                write!(f, "term {term} has a numerically zero direction")
            }
        }
    }
}

impl core::error::Error for PolyError {}

/// Number of degree-`degree` monomials in `nvars` variables.
pub fn monomial_count(nvars: usize, degree: usize) -> usize {
    match nvars {
        2 => degree + 1,
        3 => (degree + 1) * (degree + 2) / 2,
        _ => panic!("unsupported nvars {nvars}"),
    }
}

/// Exponent multi-indices of degree `degree` in graded-lex order.
///
/// The third entry is always zero when `nvars == 2`.
pub fn monomial_exponents(nvars: usize, degree: usize) -> Vec<[u32; 3]> {
    let d = degree as u32;
    let mut out = Vec::with_capacity(monomial_count(nvars, degree));
    match nvars {
        2 => {
            for a in (0..=d).rev() {
                out.push([a, d - a, 0]);
            }
        }
        3 => {
            for a in (0..=d).rev() {
                for b in (0..=(d - a)).rev() {
                    out.push([a, b, d - a - b]);
                }
            }
        }
        _ => panic!("unsupported nvars {nvars}"),
    }
    out
}

/// Position of an exponent multi-index in the graded-lex order.
pub fn monomial_index(nvars: usize, degree: usize, exp: [u32; 3]) -> usize {
    let d = degree as u32;
    debug_assert_eq!(exp[0] + exp[1] + exp[2], d, "exponent degree mismatch");
    match nvars {
        2 => {
            debug_assert_eq!(exp[2], 0);
            (d - exp[0]) as usize
        }
        3 => {
            let r = (d - exp[0]) as usize;
            r * (r + 1) / 2 + (r as u32 - exp[1]) as usize
        }
        _ => panic!("unsupported nvars {nvars}"),
    }
}

const FACTORIALS: [f64; 13] = [
    1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0, 5040.0, 40320.0, 362880.0, 3628800.0, 39916800.0,
    479001600.0,
];

pub fn factorial(n: usize) -> f64 {
    FACTORIALS[n]
}

/// d! / (b0! b1! b2!) for a multi-index `b` of total degree `d`.
fn multinomial(d: usize, b: [u32; 3]) -> f64 {
    factorial(d) / (factorial(b[0] as usize) * factorial(b[1] as usize) * factorial(b[2] as usize))
}

/// Product of falling factorials b_i (b_i - 1) ... (b_i - a_i + 1).
fn falling(b: [u32; 3], a: [u32; 3]) -> f64 {
    let mut acc = 1.0;
    for i in 0..3 {
        for k in 0..a[i] {
            acc *= (b[i] - k) as f64;
        }
    }
    acc
}

fn dominates(b: [u32; 3], a: [u32; 3]) -> bool {
    b[0] >= a[0] && b[1] >= a[1] && b[2] >= a[2]
}

/// A dense homogeneous form of fixed degree in 2 or 3 variables.
#[derive(Clone, PartialEq)]
pub struct HomogeneousForm {
    side: Side,
    nvars: usize,
    degree: usize,
    coeffs: Vec<Scalar>,
}

impl HomogeneousForm {
    /// Builds a form from a dense coefficient vector in graded-lex order.
    pub fn new(
        side: Side,
        nvars: usize,
        degree: usize,
        coeffs: Vec<Scalar>,
    ) -> Result<Self, PolyError> {
        if nvars != 2 && nvars != 3 {
            return Err(PolyError::BadVariableCount { nvars });
        }
        let expected = monomial_count(nvars, degree);
        if coeffs.len() != expected {
            return Err(PolyError::CoefficientCount {
                expected,
                got: coeffs.len(),
            });
        }
        for (i, c) in coeffs.iter().enumerate() {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(PolyError::NonFinite { index: i });
            }
        }
        Ok(HomogeneousForm {
            side,
            nvars,
            degree,
            coeffs,
        })
    }

    pub fn zero(side: Side, nvars: usize, degree: usize) -> Self {
        HomogeneousForm {
            side,
            nvars,
            degree,
            coeffs: vec![Scalar::ZERO; monomial_count(nvars, degree)],
        }
    }

    /// Form with the given (exponent, coefficient) entries, all others zero.
    pub fn from_terms(
        side: Side,
        nvars: usize,
        degree: usize,
        entries: &[([u32; 3], Scalar)],
    ) -> Self {
        let mut f = Self::zero(side, nvars, degree);
        for &(exp, c) in entries {
            f.coeffs[monomial_index(nvars, degree, exp)] += c;
        }
        f
    }

    /// The monomial `c * vars^exp`.
    pub fn monomial(side: Side, nvars: usize, degree: usize, exp: [u32; 3], c: Scalar) -> Self {
        Self::from_terms(side, nvars, degree, &[(exp, c)])
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, exp: [u32; 3]) -> Scalar {
        self.coeffs[monomial_index(self.nvars, self.degree, exp)]
    }

    /// Largest coefficient modulus.
    pub fn max_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `self * k`.
    pub fn scaled(&self, k: Scalar) -> Self {
        HomogeneousForm {
            side: self.side,
            nvars: self.nvars,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Divides by the coefficient of largest modulus, making it exactly one.
    ///
    /// Returns the normalized form and the divisor. Panics on the zero form.
    pub fn normalized_max(&self) -> (Self, Scalar) {
        let (idx, _) = self
            .coeffs
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.norm().total_cmp(&b.norm()))
            .expect("form has at least one coefficient");
        let pivot = self.coeffs[idx];
        assert!(pivot.norm() > 0.0, "cannot normalize the zero form");
        (self.scaled(Scalar::ONE / pivot), pivot)
    }

    pub(crate) fn same_shape(&self, other: &Self) -> bool {
        self.side == other.side && self.nvars == other.nvars && self.degree == other.degree
    }
}

impl fmt::Debug for HomogeneousForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "HomogeneousForm({} deg {} in {} vars: {})",
            self.side, self.degree, self.nvars, self
        )
    }
}

/// Compact textual rendering, for diagnostics only.
impl fmt::Display for HomogeneousForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = match self.side {
            Side::Primal => ["y0", "y1", "y2"],
            Side::Dual => ["X0", "X1", "X2"],
        };
        let mut first = true;
        for (exp, c) in monomial_exponents(self.nvars, self.degree)
            .into_iter()
            .zip(self.coeffs.iter())
        {
            if c.norm() == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.4}{:+.4}i)", c.re, c.im)?;
            for (i, &e) in exp.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*{}", vars[i])?,
                    _ => write!(f, "*{}^{}", vars[i], e)?,
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &HomogeneousForm {
    type Output = HomogeneousForm;
    fn add(self, rhs: &HomogeneousForm) -> HomogeneousForm {
        assert!(self.same_shape(rhs), "form shape mismatch in addition");
        HomogeneousForm {
            side: self.side,
            nvars: self.nvars,
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(rhs.coeffs.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &HomogeneousForm {
    type Output = HomogeneousForm;
    fn sub(self, rhs: &HomogeneousForm) -> HomogeneousForm {
        assert!(self.same_shape(rhs), "form shape mismatch in subtraction");
        HomogeneousForm {
            side: self.side,
            nvars: self.nvars,
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(rhs.coeffs.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &HomogeneousForm {
    type Output = HomogeneousForm;
    fn neg(self) -> HomogeneousForm {
        self.scaled(-Scalar::ONE)
    }
}

impl Mul<Scalar> for &HomogeneousForm {
    type Output = HomogeneousForm;
    fn mul(self, k: Scalar) -> HomogeneousForm {
        self.scaled(k)
    }
}

/// A form of degree exactly one.
#[derive(Clone, PartialEq)]
pub struct LinearForm(HomogeneousForm);

impl LinearForm {
    pub fn new(form: HomogeneousForm) -> Result<Self, PolyError> {
        if form.degree != 1 {
            return Err(PolyError::CoefficientCount {
                expected: form.nvars,
                got: form.coeffs.len(),
            });
        }
        Ok(LinearForm(form))
    }

    /// Linear form with the given coordinate coefficients.
    pub fn from_coeffs(side: Side, coeffs: &[Scalar]) -> Self {
        let nvars = coeffs.len();
        assert!(nvars == 2 || nvars == 3, "linear form needs 2 or 3 coords");
        LinearForm(
            HomogeneousForm::new(side, nvars, 1, coeffs.to_vec()).expect("valid linear form"),
        )
    }

    /// The i-th coordinate variable as a linear form.
    pub fn variable(side: Side, nvars: usize, i: usize) -> Self {
        let mut coeffs = vec![Scalar::ZERO; nvars];
        coeffs[i] = Scalar::ONE;
        Self::from_coeffs(side, &coeffs)
    }

    pub fn form(&self) -> &HomogeneousForm {
        &self.0
    }

    pub fn into_form(self) -> HomogeneousForm {
        self.0
    }

    pub fn scaled(&self, k: Scalar) -> Self {
        LinearForm(self.0.scaled(k))
    }
}

impl Deref for LinearForm {
    type Target = HomogeneousForm;
    fn deref(&self) -> &HomogeneousForm {
        &self.0
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearForm({})", self.0)
    }
}

impl From<LinearForm> for HomogeneousForm {
    fn from(v: LinearForm) -> HomogeneousForm {
        v.0
    }
}

/// One weighted power in a decomposition: `coefficient * direction^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionTerm {
    pub coefficient: Scalar,
    pub direction: LinearForm,
}

impl DecompositionTerm {
    pub fn new(coefficient: Scalar, direction: LinearForm) -> Self {
        DecompositionTerm {
            coefficient,
            direction,
        }
    }
}

/// A power-sum expression `sum_j coeff_j * dir_j^degree` together with the
/// relative residual it achieved against its target form.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub degree: usize,
    pub terms: Vec<DecompositionTerm>,
    /// Relative residual of the expansion against the target, in the
    /// max-coefficient-modulus norm.
    pub target_residual: f64,
}

impl Decomposition {
    /// Expands the power sum into a dense form.
    pub fn expand(&self) -> HomogeneousForm {
        assert!(!self.terms.is_empty(), "decomposition has no terms");
        let nvars = self.terms[0].direction.nvars();
        let mut acc = HomogeneousForm::zero(Side::Primal, nvars, self.degree);
        for t in &self.terms {
            acc = &acc + &power_of_linear(&t.direction, self.degree).scaled(t.coefficient);
        }
        acc
    }
}

/// Applies the differential operator `x` to the primal form `f`.
///
/// On monomials, `X^a` acting on `y^b` gives `prod_i b_i!/(b_i-a_i)! * y^(b-a)`
/// when `a <= b` componentwise and zero otherwise; the general case extends
/// bilinearly.
pub fn apolar_apply(x: &HomogeneousForm, f: &HomogeneousForm) -> HomogeneousForm {
    assert_eq!(x.side, Side::Dual, "operator must be dual");
    assert_eq!(f.side, Side::Primal, "operand must be primal");
    assert_eq!(x.nvars, f.nvars, "variable count mismatch");
    assert!(x.degree <= f.degree, "operator degree exceeds form degree");
    let out_degree = f.degree - x.degree;
    let x_exps = monomial_exponents(x.nvars, x.degree);
    let f_exps = monomial_exponents(f.nvars, f.degree);
    let mut out = HomogeneousForm::zero(Side::Primal, f.nvars, out_degree);
    for (ai, &a) in x_exps.iter().enumerate() {
        let xa = x.coeffs[ai];
        if xa == Scalar::ZERO {
            continue;
        }
        for (bi, &b) in f_exps.iter().enumerate() {
            if !dominates(b, a) {
                continue;
            }
            let fb = f.coeffs[bi];
            if fb == Scalar::ZERO {
                continue;
            }
            let target = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
            let idx = monomial_index(f.nvars, out_degree, target);
            out.coeffs[idx] += xa * fb * falling(b, a);
        }
    }
    out
}

/// Matrix of `F -> apolar_apply(x, F)` on degree-`degree` primal forms, in
/// the graded-lex monomial bases.
pub fn apolar_matrix(x: &HomogeneousForm, degree: usize) -> CMat {
    assert_eq!(x.side, Side::Dual, "operator must be dual");
    assert!(x.degree <= degree);
    let out_degree = degree - x.degree;
    let rows = monomial_count(x.nvars, out_degree);
    let cols = monomial_count(x.nvars, degree);
    let mut m = CMat::zeros(rows, cols);
    for (col, &b) in monomial_exponents(x.nvars, degree).iter().enumerate() {
        for (ai, &a) in monomial_exponents(x.nvars, x.degree).iter().enumerate() {
            let xa = x.coeffs[ai];
            if xa == Scalar::ZERO || !dominates(b, a) {
                continue;
            }
            let target = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
            let row = monomial_index(x.nvars, out_degree, target);
            m[(row, col)] += xa * falling(b, a);
        }
    }
    m
}

/// `v^d` expanded as a dense primal form.
pub fn power_of_linear(v: &LinearForm, d: usize) -> HomogeneousForm {
    assert_eq!(v.side(), Side::Primal, "powers are taken of primal forms");
    let nvars = v.nvars();
    let c = v.coeffs();
    let mut out = HomogeneousForm::zero(Side::Primal, nvars, d);
    for (i, &b) in monomial_exponents(nvars, d).iter().enumerate() {
        let mut val = Scalar::new(multinomial(d, b), 0.0);
        for (j, cj) in c.iter().enumerate() {
            val *= cj.powu(b[j]);
        }
        out.coeffs[i] = val;
    }
    out
}

/// Ordinary polynomial product of two forms on the same side.
pub fn multiply(a: &HomogeneousForm, b: &HomogeneousForm) -> HomogeneousForm {
    assert_eq!(a.side, b.side, "cannot multiply across sides");
    assert_eq!(a.nvars, b.nvars, "variable count mismatch");
    let degree = a.degree + b.degree;
    let a_exps = monomial_exponents(a.nvars, a.degree);
    let b_exps = monomial_exponents(b.nvars, b.degree);
    let mut out = HomogeneousForm::zero(a.side, a.nvars, degree);
    for (ai, &ea) in a_exps.iter().enumerate() {
        let ca = a.coeffs[ai];
        if ca == Scalar::ZERO {
            continue;
        }
        for (bi, &eb) in b_exps.iter().enumerate() {
            let cb = b.coeffs[bi];
            if cb == Scalar::ZERO {
                continue;
            }
            let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
            out.coeffs[monomial_index(a.nvars, degree, e)] += ca * cb;
        }
    }
    out
}

/// Product of dual forms, used to assemble composite operators.
pub fn dual_multiply(x: &HomogeneousForm, y: &HomogeneousForm) -> HomogeneousForm {
    assert_eq!(x.side, Side::Dual, "dual_multiply needs dual operands");
    assert_eq!(y.side, Side::Dual, "dual_multiply needs dual operands");
    multiply(x, y)
}

/// Evaluation `x(v) = apolar_apply(x, v^d) / d!` of a degree-d dual form on a
/// direction, computed in closed form by substituting the coordinates of `v`.
pub fn evaluate_dual(x: &HomogeneousForm, v: &LinearForm) -> Scalar {
    assert_eq!(x.side, Side::Dual, "evaluation needs a dual form");
    assert_eq!(v.side(), Side::Primal, "evaluation point must be primal");
    assert_eq!(x.nvars, v.nvars(), "variable count mismatch");
    let c = v.coeffs();
    let mut acc = Scalar::ZERO;
    for (i, &a) in monomial_exponents(x.nvars, x.degree).iter().enumerate() {
        let xa = x.coeffs[i];
        if xa == Scalar::ZERO {
            continue;
        }
        let mut val = xa;
        for (j, cj) in c.iter().enumerate() {
            val *= cj.powu(a[j]);
        }
        acc += val;
    }
    acc
}

/// Ordinary polynomial evaluation of a form at coordinates, with no
/// apolarity weights (the stored coefficients are plain monomial
/// coefficients on either side).
pub fn evaluate_at(f: &HomogeneousForm, z: &[Scalar]) -> Scalar {
    assert_eq!(z.len(), f.nvars, "coordinate count mismatch");
    let mut acc = Scalar::ZERO;
    for (i, &a) in monomial_exponents(f.nvars, f.degree).iter().enumerate() {
        let fa = f.coeffs[i];
        if fa == Scalar::ZERO {
            continue;
        }
        let mut val = fa;
        for (j, zj) in z.iter().enumerate() {
            val *= zj.powu(a[j]);
        }
        acc += val;
    }
    acc
}

/// The `x`-antiderivative of `sum_j coeff_j * dir_j^d` relative to its terms:
/// the degree `d + deg(x)` form `F` with `apolar_apply(x, F)` equal to the
/// expansion, given that `x` vanishes on none of the directions.
pub fn antiderivative(
    terms: &[DecompositionTerm],
    d: usize,
    x: &HomogeneousForm,
    zero_tol: f64,
) -> Result<HomogeneousForm, PolyError> {
    assert_eq!(x.side, Side::Dual, "antiderivative operator must be dual");
    assert!(!terms.is_empty(), "antiderivative needs at least one term");
    let delta = x.degree;
    let ratio = factorial(d) / factorial(d + delta);
    let x_norm = x.max_norm();
    let mut acc = HomogeneousForm::zero(Side::Primal, x.nvars, d + delta);
    for (j, t) in terms.iter().enumerate() {
        let dir_norm = t.direction.max_norm();
        if dir_norm == 0.0 {
            return Err(PolyError::ZeroDirection { term: j });
        }
        let val = evaluate_dual(x, &t.direction);
        let scale = x_norm * num_traits::Float::powi(dir_norm, delta as i32);
        if val.norm() <= zero_tol * scale {
            return Err(PolyError::AntiderivativeUndefined { term: j });
        }
        let weight = t.coefficient * ratio / val;
        acc = &acc + &power_of_linear(&t.direction, d + delta).scaled(weight);
    }
    Ok(acc)
}

/// Matrix of the middle catalecticant of a ternary quartic: the map sending
/// a degree-2 dual monomial to the coefficients of its action on `f`, both
/// sides in graded-lex bases.
///
/// Entries are `f_(a+b) * (a+b)!/b!` at row `b`, column `a`; the row-scaled
/// matrix `diag(b!) * M` is symmetric. Its numerical rank lower-bounds the
/// Waring rank of `f`.
pub fn catalecticant_matrix(f: &HomogeneousForm) -> CMat {
    assert_eq!(f.side, Side::Primal);
    assert_eq!(f.nvars, 3, "catalecticant is for ternary forms");
    assert_eq!(f.degree, 4, "catalecticant is for quartics");
    let exps2 = monomial_exponents(3, 2);
    let mut m = CMat::zeros(6, 6);
    for (col, &a) in exps2.iter().enumerate() {
        for (row, &b) in exps2.iter().enumerate() {
            let e = [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
            m[(row, col)] = f.coeff(e) * falling(e, a);
        }
    }
    m
}

/// Relative distance `|f - g| / max(|f|, |g|)` in the max-coefficient norm.
pub fn rel_distance(f: &HomogeneousForm, g: &HomogeneousForm) -> f64 {
    let denom = f.max_norm().max(g.max_norm());
    if denom == 0.0 {
        return 0.0;
    }
    (f - g).max_norm() / denom
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Scalar {
        Scalar::new(re, 0.0)
    }

    fn lin(side: Side, coeffs: &[f64]) -> LinearForm {
        let v: Vec<Scalar> = coeffs.iter().map(|&x| c(x)).collect();
        LinearForm::from_coeffs(side, &v)
    }

    #[test]
    fn graded_lex_order_and_index_agree() {
        for nvars in [2usize, 3] {
            for degree in 0..=5 {
                let exps = monomial_exponents(nvars, degree);
                assert_eq!(exps.len(), monomial_count(nvars, degree));
                for (i, &e) in exps.iter().enumerate() {
                    assert_eq!(monomial_index(nvars, degree, e), i);
                }
                // strictly decreasing lexicographic order
                for w in exps.windows(2) {
                    assert!(w[0] > w[1]);
                }
            }
        }
    }

    #[test]
    fn degree_two_order_matches_convention() {
        let exps = monomial_exponents(3, 2);
        assert_eq!(
            exps,
            vec![
                [2, 0, 0],
                [1, 1, 0],
                [1, 0, 1],
                [0, 2, 0],
                [0, 1, 1],
                [0, 0, 2]
            ]
        );
    }

    #[test]
    fn apolar_monomial_rule() {
        // X0*X1 acting on y0^2*y1*y2 -> 2 * y0*y2
        let x = HomogeneousForm::monomial(Side::Dual, 3, 2, [1, 1, 0], c(1.0));
        let f = HomogeneousForm::monomial(Side::Primal, 3, 4, [2, 1, 1], c(1.0));
        let out = apolar_apply(&x, &f);
        let expected = HomogeneousForm::monomial(Side::Primal, 3, 2, [1, 0, 1], c(2.0));
        assert!(rel_distance(&out, &expected) < 1e-15);
    }

    #[test]
    fn apolar_absent_variable_kills() {
        let x = HomogeneousForm::monomial(Side::Dual, 3, 1, [0, 0, 1], c(1.0));
        let f = HomogeneousForm::monomial(Side::Primal, 3, 3, [3, 0, 0], c(1.0));
        assert_eq!(apolar_apply(&x, &f).max_norm(), 0.0);
    }

    #[test]
    fn apolar_triple_product_on_power() {
        // d/dX0 dX1 dX2 of (y0+y1+y2)^4 = 24 (y0+y1+y2)
        let x = HomogeneousForm::monomial(Side::Dual, 3, 3, [1, 1, 1], c(1.0));
        let v = lin(Side::Primal, &[1.0, 1.0, 1.0]);
        let f = power_of_linear(&v, 4);
        let out = apolar_apply(&x, &f);
        let expected = v.form().scaled(c(24.0));
        assert!(rel_distance(&out, &expected) < 1e-14);
    }

    #[test]
    #[should_panic(expected = "operator degree exceeds form degree")]
    fn apolar_degree_mismatch_panics() {
        let x = HomogeneousForm::monomial(Side::Dual, 3, 3, [1, 1, 1], c(1.0));
        let f = HomogeneousForm::monomial(Side::Primal, 3, 2, [1, 1, 0], c(1.0));
        let _ = apolar_apply(&x, &f);
    }

    #[test]
    #[should_panic(expected = "variable count mismatch")]
    fn apolar_nvars_mismatch_panics() {
        let x = HomogeneousForm::monomial(Side::Dual, 2, 1, [1, 0, 0], c(1.0));
        let f = HomogeneousForm::monomial(Side::Primal, 3, 2, [1, 1, 0], c(1.0));
        let _ = apolar_apply(&x, &f);
    }

    #[test]
    fn power_of_basis_vector() {
        let v = lin(Side::Primal, &[1.0, 0.0, 0.0]);
        let p = power_of_linear(&v, 4);
        let expected = HomogeneousForm::monomial(Side::Primal, 3, 4, [4, 0, 0], c(1.0));
        assert!(rel_distance(&p, &expected) < 1e-15);
    }

    #[test]
    fn power_binomial() {
        let v = lin(Side::Primal, &[1.0, 1.0]);
        let p = power_of_linear(&v, 2);
        let expected = HomogeneousForm::new(Side::Primal, 2, 2, vec![c(1.0), c(2.0), c(1.0)])
            .expect("valid");
        assert!(rel_distance(&p, &expected) < 1e-15);
    }

    #[test]
    fn power_cube_expansion() {
        // (2 y0 - y2)^3 = 8 y0^3 - 12 y0^2 y2 + 6 y0 y2^2 - y2^3
        let v = lin(Side::Primal, &[2.0, 0.0, -1.0]);
        let p = power_of_linear(&v, 3);
        let expected = HomogeneousForm::from_terms(
            Side::Primal,
            3,
            3,
            &[
                ([3, 0, 0], c(8.0)),
                ([2, 0, 1], c(-12.0)),
                ([1, 0, 2], c(6.0)),
                ([0, 0, 3], c(-1.0)),
            ],
        );
        assert!(rel_distance(&p, &expected) < 1e-15);
    }

    #[test]
    fn dual_products() {
        let x0 = HomogeneousForm::monomial(Side::Dual, 3, 1, [1, 0, 0], c(1.0));
        let x1 = HomogeneousForm::monomial(Side::Dual, 3, 1, [0, 1, 0], c(1.0));
        let x2 = HomogeneousForm::monomial(Side::Dual, 3, 1, [0, 0, 1], c(1.0));
        let p = dual_multiply(&x0, &x1);
        assert!(rel_distance(
            &p,
            &HomogeneousForm::monomial(Side::Dual, 3, 2, [1, 1, 0], c(1.0))
        ) < 1e-15);
        let q = dual_multiply(&p, &x2);
        assert!(rel_distance(
            &q,
            &HomogeneousForm::monomial(Side::Dual, 3, 3, [1, 1, 1], c(1.0))
        ) < 1e-15);
        // (X0+X1)(X0-X1) = X0^2 - X1^2
        let s = &x0 + &x1;
        let d = &x0 - &x1;
        let sd = dual_multiply(&s, &d);
        let expected = HomogeneousForm::from_terms(
            Side::Dual,
            3,
            2,
            &[([2, 0, 0], c(1.0)), ([0, 2, 0], c(-1.0))],
        );
        assert!(rel_distance(&sd, &expected) < 1e-15);
    }

    #[test]
    fn evaluation_examples() {
        let x = HomogeneousForm::monomial(Side::Dual, 3, 3, [1, 1, 1], c(1.0));
        let v = lin(Side::Primal, &[1.0, 1.0, 1.0]);
        assert!((evaluate_dual(&x, &v) - c(1.0)).norm() < 1e-15);

        let x0sq = HomogeneousForm::monomial(Side::Dual, 3, 2, [2, 0, 0], c(1.0));
        let y1 = lin(Side::Primal, &[0.0, 1.0, 0.0]);
        assert_eq!(evaluate_dual(&x0sq, &y1), Scalar::ZERO);

        // (X0+X1)^2 evaluated at 2 y0 is 4
        let xs = lin(Side::Dual, &[1.0, 1.0, 0.0]);
        let op = dual_multiply(xs.form(), xs.form());
        let v2 = lin(Side::Primal, &[2.0, 0.0, 0.0]);
        assert!((evaluate_dual(&op, &v2) - c(4.0)).norm() < 1e-15);
    }

    #[test]
    fn evaluation_matches_defining_formula() {
        // x(v) = apolar(x, v^d)/d! for a random-ish pair
        let x = HomogeneousForm::from_terms(
            Side::Dual,
            3,
            2,
            &[
                ([2, 0, 0], Scalar::new(0.3, -0.2)),
                ([1, 1, 0], Scalar::new(-1.1, 0.4)),
                ([0, 1, 1], Scalar::new(0.9, 0.9)),
            ],
        );
        let v = LinearForm::from_coeffs(
            Side::Primal,
            &[
                Scalar::new(0.7, 0.1),
                Scalar::new(-0.5, 0.6),
                Scalar::new(0.2, -0.8),
            ],
        );
        let lhs = evaluate_dual(&x, &v);
        let rhs = apolar_apply(&x, &power_of_linear(&v, 2)).coeffs()[0] / factorial(2);
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn antiderivative_single_term() {
        let v = lin(Side::Primal, &[1.0, 1.0, 1.0]);
        let x = HomogeneousForm::monomial(Side::Dual, 3, 3, [1, 1, 1], c(1.0));
        let terms = [DecompositionTerm::new(c(1.0), v.clone())];
        let big = antiderivative(&terms, 1, &x, 1e-9).expect("defined");
        let expected = power_of_linear(&v, 4).scaled(c(1.0 / 24.0));
        assert!(rel_distance(&big, &expected) < 1e-14);
        // derivative recovers v
        let back = apolar_apply(&x, &big);
        assert!(rel_distance(&back, v.form()) < 1e-14);
    }

    #[test]
    fn antiderivative_undefined_when_operator_vanishes() {
        let v = lin(Side::Primal, &[1.0, 0.0, 0.0]);
        let x = HomogeneousForm::monomial(Side::Dual, 3, 1, [0, 1, 0], c(1.0));
        let terms = [DecompositionTerm::new(c(1.0), v)];
        match antiderivative(&terms, 1, &x, 1e-9) {
            Err(PolyError::AntiderivativeUndefined { term: 0 }) => {}
            other => panic!("expected AntiderivativeUndefined, got {other:?}"),
        }
    }

    #[test]
    fn antiderivative_two_variable_pair() {
        // terms (1, y0+y1), (1, y0-y1), d = 2, x = X0:
        // F = ((y0+y1)^3 + (y0-y1)^3)/3 = (2 y0^3 + 6 y0 y1^2)/3
        let u = lin(Side::Primal, &[1.0, 1.0]);
        let w = lin(Side::Primal, &[1.0, -1.0]);
        let x = HomogeneousForm::monomial(Side::Dual, 2, 1, [1, 0, 0], c(1.0));
        let terms = [
            DecompositionTerm::new(c(1.0), u.clone()),
            DecompositionTerm::new(c(1.0), w.clone()),
        ];
        let big = antiderivative(&terms, 2, &x, 1e-9).expect("defined");
        let expected = HomogeneousForm::new(
            Side::Primal,
            2,
            3,
            vec![c(2.0 / 3.0), c(0.0), c(2.0), c(0.0)],
        )
        .expect("valid");
        assert!(rel_distance(&big, &expected) < 1e-14);
        // derivative equals the stated expansion
        let back = apolar_apply(&x, &big);
        let target = &power_of_linear(&u, 2) + &power_of_linear(&w, 2);
        assert!(rel_distance(&back, &target) < 1e-14);
    }

    #[test]
    fn catalecticant_ranks() {
        let y0 = lin(Side::Primal, &[1.0, 0.0, 0.0]);
        let single = power_of_linear(&y0, 4);
        let m1 = catalecticant_matrix(&single);
        assert_eq!(m1.numerical_rank(1e-9), 1);

        let y1 = lin(Side::Primal, &[0.0, 1.0, 0.0]);
        let y2 = lin(Side::Primal, &[0.0, 0.0, 1.0]);
        let three = &(&power_of_linear(&y0, 4) + &power_of_linear(&y1, 4))
            + &power_of_linear(&y2, 4);
        assert_eq!(catalecticant_matrix(&three).numerical_rank(1e-9), 3);
    }

    #[test]
    fn apolar_matrix_matches_apolar_apply() {
        let x = HomogeneousForm::from_terms(
            Side::Dual,
            3,
            2,
            &[
                ([1, 1, 0], Scalar::new(1.0, 0.5)),
                ([0, 0, 2], Scalar::new(-0.3, 0.0)),
            ],
        );
        let f = HomogeneousForm::from_terms(
            Side::Primal,
            3,
            4,
            &[
                ([2, 1, 1], Scalar::new(2.0, -1.0)),
                ([0, 2, 2], Scalar::new(0.0, 1.0)),
                ([4, 0, 0], Scalar::new(1.0, 0.0)),
            ],
        );
        let m = apolar_matrix(&x, 4);
        let via_matrix = m.matvec(f.coeffs());
        let direct = apolar_apply(&x, &f);
        for (a, b) in via_matrix.iter().zip(direct.coeffs()) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn form_constructor_validation() {
        assert!(matches!(
            HomogeneousForm::new(Side::Primal, 3, 2, vec![Scalar::ZERO; 5]),
            Err(PolyError::CoefficientCount { expected: 6, got: 5 })
        ));
        let mut coeffs = vec![Scalar::ZERO; 6];
        coeffs[2] = Scalar::new(f64::NAN, 0.0);
        assert!(matches!(
            HomogeneousForm::new(Side::Primal, 3, 2, coeffs),
            Err(PolyError::NonFinite { index: 2 })
        ));
        assert!(matches!(
            HomogeneousForm::new(Side::Primal, 4, 1, vec![Scalar::ZERO; 4]),
            Err(PolyError::BadVariableCount { nvars: 4 })
        ));
    }
}
