//! Small dense complex matrices and the handful of factorizations the
//! geometry needs: Gaussian elimination, a one-sided Jacobi SVD, nullspaces,
//! least squares, and 2x2 eigenpairs.
//!
//! Every matrix here is tiny (at most ten rows or columns), so the
//! implementations favor clarity and numerical robustness over speed.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

type Scalar = Complex64;

#[derive(Debug, Clone, PartialEq)]
pub enum LinalgError {
    /// Gaussian elimination met a pivot at roundoff scale.
    Singular,
    /// The Jacobi sweep limit was hit before the columns decoupled.
    NoConvergence,
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::Singular => write!(f, "matrix is numerically singular"),
            LinalgError::NoConvergence => write!(f, "SVD sweeps did not converge"),
        }
    }
}

impl core::error::Error for LinalgError {}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![Scalar::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::ONE;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Scalar>]) -> Self {
        let r = rows.len();
        assert!(r > 0, "matrix needs at least one row");
        let c = rows[0].len();
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn from_cols(cols: &[Vec<Scalar>]) -> Self {
        let c = cols.len();
        assert!(c > 0, "matrix needs at least one column");
        let r = cols[0].len();
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r, "ragged columns");
            for (i, &v) in col.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn matvec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self[(i, j)] * v[j])
                    .sum::<Scalar>()
            })
            .collect()
    }

    pub fn matmul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == Scalar::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat {
        let mut out = CMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scaled(&self, k: Scalar) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * k).collect(),
        }
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Solves `self * x = b` by Gaussian elimination with partial pivoting.
    pub fn solve(&self, b: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        assert_eq!(self.rows, self.cols, "solve needs a square matrix");
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let n = self.rows;
        let mut a = self.clone();
        let mut rhs = b.to_vec();
        let scale = a.max_abs().max(1e-300);
        for k in 0..n {
            let (piv, piv_abs) = (k..n)
                .map(|i| (i, a[(i, k)].norm()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .expect("nonempty pivot range");
            if piv_abs <= 1e-14 * scale {
                return Err(LinalgError::Singular);
            }
            if piv != k {
                for j in 0..n {
                    let t = a[(k, j)];
                    a[(k, j)] = a[(piv, j)];
                    a[(piv, j)] = t;
                }
                rhs.swap(k, piv);
            }
            for i in (k + 1)..n {
                let factor = a[(i, k)] / a[(k, k)];
                if factor == Scalar::ZERO {
                    continue;
                }
                for j in k..n {
                    let akj = a[(k, j)];
                    a[(i, j)] -= factor * akj;
                }
                let rk = rhs[k];
                rhs[i] -= factor * rk;
            }
        }
        let mut x = vec![Scalar::ZERO; n];
        for i in (0..n).rev() {
            let mut acc = rhs[i];
            for j in (i + 1)..n {
                acc -= a[(i, j)] * x[j];
            }
            x[i] = acc / a[(i, i)];
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<CMat, LinalgError> {
        assert_eq!(self.rows, self.cols, "inverse needs a square matrix");
        let n = self.rows;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![Scalar::ZERO; n];
            e[j] = Scalar::ONE;
            cols.push(self.solve(&e)?);
        }
        Ok(CMat::from_cols(&cols))
    }

    /// One-sided Jacobi singular value decomposition `self = U diag(s) V^H`.
    pub fn svd(&self) -> Result<Svd, LinalgError> {
        let m = self.rows;
        let n = self.cols;
        let mut w = self.clone();
        let mut v = CMat::identity(n);
        // couplings below a modest multiple of machine epsilon sit on the
        // roundoff plateau: rotating them reintroduces equal-sized noise in
        // other pairs and the sweep never settles
        let skip = 100.0 * f64::EPSILON;
        // columns below roundoff scale are converged zeros; rotating a pair
        // of such columns against each other would cycle forever
        let floor_sqr = {
            let f = f64::EPSILON * self.frobenius_norm();
            f * f
        };
        let coupling = |w: &CMat, p: usize, q: usize| -> (f64, f64, Scalar) {
            let mut a = 0.0;
            let mut b = 0.0;
            let mut c = Scalar::ZERO;
            for i in 0..m {
                let wp = w[(i, p)];
                let wq = w[(i, q)];
                a += wp.norm_sqr();
                b += wq.norm_sqr();
                c += wp.conj() * wq;
            }
            (a, b, c)
        };
        let max_sweeps = 60;
        let mut converged = false;
        for _ in 0..max_sweeps {
            let mut rotated = false;
            for p in 0..n.saturating_sub(1) {
                for q in (p + 1)..n {
                    let (a, b, c) = coupling(&w, p, q);
                    let cn = c.norm();
                    if a <= floor_sqr || b <= floor_sqr || cn <= skip * (a * b).sqrt() {
                        continue;
                    }
                    rotated = true;
                    // phase factor making the column inner product real
                    let phase = c / cn;
                    let alpha = phase.conj();
                    let tau = (b - a) / (2.0 * cn);
                    let t = if tau == 0.0 {
                        1.0
                    } else {
                        tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                    };
                    let cs = 1.0 / (1.0 + t * t).sqrt();
                    let sn = cs * t;
                    for i in 0..m {
                        let wp = w[(i, p)];
                        let wq = alpha * w[(i, q)];
                        w[(i, p)] = cs * wp - sn * wq;
                        w[(i, q)] = sn * wp + cs * wq;
                    }
                    for i in 0..n {
                        let vp = v[(i, p)];
                        let vq = alpha * v[(i, q)];
                        v[(i, p)] = cs * vp - sn * vq;
                        v[(i, q)] = sn * vp + cs * vq;
                    }
                }
            }
            if !rotated {
                converged = true;
                break;
            }
        }
        if !converged && n > 1 {
            // accept a residual plateau far below every caller tolerance
            let mut worst: f64 = 0.0;
            for p in 0..(n - 1) {
                for q in (p + 1)..n {
                    let (a, b, c) = coupling(&w, p, q);
                    if a > floor_sqr && b > floor_sqr {
                        worst = worst.max(c.norm() / (a * b).sqrt());
                    }
                }
            }
            if worst > 1e-8 {
                return Err(LinalgError::NoConvergence);
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        let norms: Vec<f64> = (0..n)
            .map(|j| (0..m).map(|i| w[(i, j)].norm_sqr()).sum::<f64>().sqrt())
            .collect();
        order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
        let mut singular_values = Vec::with_capacity(n);
        let mut u = CMat::zeros(m, n);
        let mut v_sorted = CMat::zeros(n, n);
        for (new_j, &old_j) in order.iter().enumerate() {
            let s = norms[old_j];
            singular_values.push(s);
            for i in 0..m {
                u[(i, new_j)] = if s > 0.0 {
                    w[(i, old_j)] / s
                } else {
                    Scalar::ZERO
                };
            }
            for i in 0..n {
                v_sorted[(i, new_j)] = v[(i, old_j)];
            }
        }
        Ok(Svd {
            u,
            singular_values,
            v: v_sorted,
        })
    }

    /// Count of singular values above `rtol` times the largest.
    pub fn numerical_rank(&self, rtol: f64) -> usize {
        let svd = self.svd().expect("SVD of a small matrix converges");
        let smax = svd.singular_values.first().copied().unwrap_or(0.0);
        if smax == 0.0 {
            return 0;
        }
        svd.singular_values
            .iter()
            .filter(|&&s| s > rtol * smax)
            .count()
    }

    /// Orthonormal basis of the numerical nullspace, as matrix columns.
    pub fn nullspace(&self, rtol: f64) -> Vec<Vec<Scalar>> {
        let svd = self.svd().expect("SVD of a small matrix converges");
        let smax = svd.singular_values.first().copied().unwrap_or(0.0);
        let mut out = Vec::new();
        for (j, &s) in svd.singular_values.iter().enumerate() {
            if s <= rtol * smax {
                out.push(svd.v.col(j));
            }
        }
        out
    }

    /// Minimum-norm least-squares solution of `self * x = b` via the SVD,
    /// discarding singular values below `rcond` times the largest.
    pub fn lstsq(&self, b: &[Scalar], rcond: f64) -> Vec<Scalar> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let svd = self.svd().expect("SVD of a small matrix converges");
        let smax = svd.singular_values.first().copied().unwrap_or(0.0);
        let mut x = vec![Scalar::ZERO; self.cols];
        for (k, &s) in svd.singular_values.iter().enumerate() {
            if s <= rcond * smax || s == 0.0 {
                continue;
            }
            let mut proj = Scalar::ZERO;
            for (i, bi) in b.iter().enumerate() {
                proj += svd.u[(i, k)].conj() * bi;
            }
            let coeff = proj / s;
            for (i, xi) in x.iter_mut().enumerate() {
                *xi += coeff * svd.v[(i, k)];
            }
        }
        x
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let v = self[(i, j)];
                write!(f, "{:.4}{:+.4}i  ", v.re, v.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Result of [`CMat::svd`]: `u * diag(singular_values) * v.adjoint()`
/// reconstructs the matrix; singular values are sorted descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMat,
    pub singular_values: Vec<f64>,
    pub v: CMat,
}

/// Eigenpairs of a 2x2 complex matrix.
#[derive(Debug, Clone)]
pub struct Eig2 {
    pub values: [Scalar; 2],
    pub vectors: [[Scalar; 2]; 2],
    /// Discriminant `tr^2 - 4 det`; near zero means a repeated eigenvalue.
    pub disc: Scalar,
}

/// Eigenvalues and eigenvectors of a 2x2 matrix by the quadratic formula.
///
/// When the eigenvalue is repeated and the matrix is not diagonal the two
/// returned vectors coincide; callers decide how to treat that case.
pub fn eig2(m: &CMat) -> Eig2 {
    assert_eq!(m.rows(), 2);
    assert_eq!(m.cols(), 2);
    let a = m[(0, 0)];
    let b = m[(0, 1)];
    let c = m[(1, 0)];
    let d = m[(1, 1)];
    let tr = a + d;
    let det = a * d - b * c;
    let disc = tr * tr - 4.0 * det;
    let root = disc.sqrt();
    let l0 = (tr + root) / 2.0;
    let l1 = (tr - root) / 2.0;
    let vector_for = |l: Scalar| -> [Scalar; 2] {
        // rows of m - l*I; the larger row gives the more stable kernel vector
        let r0 = [a - l, b];
        let r1 = [c, d - l];
        let n0 = r0[0].norm_sqr() + r0[1].norm_sqr();
        let n1 = r1[0].norm_sqr() + r1[1].norm_sqr();
        let r = if n0 >= n1 { r0 } else { r1 };
        if r[0].norm_sqr() + r[1].norm_sqr() == 0.0 {
            // m is exactly l*I: every vector works, pick a basis vector
            return [Scalar::ONE, Scalar::ZERO];
        }
        [r[1], -r[0]]
    };
    Eig2 {
        values: [l0, l1],
        vectors: [vector_for(l0), vector_for(l1)],
        disc,
    }
}

/// Projective distance between nonzero 2-vectors:
/// `|p0 q1 - p1 q0| / (|p| |q|)`.
pub fn proj_distance_2(p: &[Scalar; 2], q: &[Scalar; 2]) -> f64 {
    let cross = (p[0] * q[1] - p[1] * q[0]).norm();
    let np = (p[0].norm_sqr() + p[1].norm_sqr()).sqrt();
    let nq = (q[0].norm_sqr() + q[1].norm_sqr()).sqrt();
    assert!(np > 0.0 && nq > 0.0, "projective distance of zero vector");
    cross / (np * nq)
}

/// Projective distance between nonzero 3-vectors via the cross product norm.
pub fn proj_distance_3(p: &[Scalar; 3], q: &[Scalar; 3]) -> f64 {
    let cx = p[1] * q[2] - p[2] * q[1];
    let cy = p[2] * q[0] - p[0] * q[2];
    let cz = p[0] * q[1] - p[1] * q[0];
    let cross = (cx.norm_sqr() + cy.norm_sqr() + cz.norm_sqr()).sqrt();
    let np = (p[0].norm_sqr() + p[1].norm_sqr() + p[2].norm_sqr()).sqrt();
    let nq = (q[0].norm_sqr() + q[1].norm_sqr() + q[2].norm_sqr()).sqrt();
    assert!(np > 0.0 && nq > 0.0, "projective distance of zero vector");
    cross / (np * nq)
}
