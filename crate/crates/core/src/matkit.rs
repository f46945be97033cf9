//! Dense complex linear algebra for the small matrices used throughout the
//! crate (dimension at most 81).
//!
//! Everything here works on [`CMatrix`], a row-major `Vec<C64>`. Eigenvalues of
//! Hermitian matrices come from cyclic Jacobi rotations; determinants from LU
//! with partial pivoting.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64 as C64;
use thiserror::Error;

/// Default scale-relative tolerance for Hermiticity checks.
pub const HERMITIAN_TOL: f64 = 1e-10;

const JACOBI_REL_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatError {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("Jacobi iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
}

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major data. Fails if the length is not
    /// `rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self, MatError> {
        if data.len() != rows * cols {
            return Err(MatError::DimensionMismatch(format!(
                "expected {} entries for {}x{}, got {}",
                rows * cols,
                rows,
                cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        Self::from_fn(n, m, |i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    /// Matrix unit `|j><k|` of dimension `n` (0-based indices).
    pub fn unit(n: usize, j: usize, k: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(j, k)] = C64::new(1.0, 0.0);
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise distance to another matrix of the same shape.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max_{i,j} |A[i][j] - conj(A[j][i])|`; infinite for non-square input.
    pub fn hermiticity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut r: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                r = r.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        r
    }

    /// Hermitian within `tol * (1 + max|A|)`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol * (1.0 + self.max_abs())
    }

    /// `(A + A^dagger) / 2`
    pub fn hermitian_part(&self) -> Self {
        debug_assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// Top-left `k x k` block.
    pub fn leading_block(&self, k: usize) -> Self {
        Self::from_fn(k, k, |i, j| self[(i, j)])
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add shape mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub shape mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Display for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>10.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn require_square(a: &CMatrix) -> Result<(), MatError> {
    if a.is_square() {
        Ok(())
    } else {
        Err(MatError::NonSquare {
            rows: a.rows,
            cols: a.cols,
        })
    }
}

/// All eigenvalues of a Hermitian matrix, ascending.
///
/// Cyclic Jacobi: each off-diagonal pair is first made real by a diagonal
/// phase, then annihilated with a real Givens rotation. Iteration stops once
/// the off-diagonal Frobenius norm drops below `1e-14 * ||A||_F`.
pub fn hermitian_eigenvalues(a: &CMatrix, tol: f64) -> Result<Vec<f64>, MatError> {
    require_square(a)?;
    let residual = a.hermiticity_residual();
    if residual > tol * (1.0 + a.max_abs()) {
        return Err(MatError::NotHermitian { residual });
    }
    let n = a.rows;
    let mut m = a.hermitian_part();
    let total = m.data.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let threshold = JACOBI_REL_TOL * JACOBI_REL_TOL * total;

    let off_mass = |m: &CMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)].norm_sqr();
                }
            }
        }
        s
    };

    let mut sweeps = 0;
    while off_mass(&m) > threshold {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(MatError::NoConvergence(sweeps));
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut m, p, q);
            }
        }
    }

    let mut ev: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).expect("NaN eigenvalue"));
    Ok(ev)
}

fn jacobi_rotate(m: &mut CMatrix, p: usize, q: usize) {
    let n = m.rows;
    let apq = m[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    if g <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        m[(p, q)] = C64::new(0.0, 0.0);
        m[(q, p)] = C64::new(0.0, 0.0);
        return;
    }

    // Phase on index q so that the (p, q) entry becomes the real number g.
    let phase = apq / g;
    for r in 0..n {
        m[(r, q)] *= phase.conj();
    }
    for r in 0..n {
        m[(q, r)] *= phase;
    }

    let theta = (aqq - app) / (2.0 * g);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for r in 0..n {
        let rp = m[(r, p)];
        let rq = m[(r, q)];
        m[(r, p)] = rp * c - rq * s;
        m[(r, q)] = rp * s + rq * c;
    }
    for r in 0..n {
        let pr = m[(p, r)];
        let qr = m[(q, r)];
        m[(p, r)] = pr * c - qr * s;
        m[(q, r)] = pr * s + qr * c;
    }
    m[(p, q)] = C64::new(0.0, 0.0);
    m[(q, p)] = C64::new(0.0, 0.0);
    m[(p, p)] = C64::new(app - t * g, 0.0);
    m[(q, q)] = C64::new(aqq + t * g, 0.0);
}

/// Singular values in descending order.
///
/// Computed as the non-negative half of the spectrum of the Hermitian
/// embedding `[[0, A], [A^dagger, 0]]`, whose eigenvalues are `+-sigma_i`.
/// Unlike the spectrum of `A^dagger A` this does not square small singular
/// values, so zero singular values come out at machine precision.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    let (m, n) = (a.rows, a.cols);
    let k = m.min(n);
    if k == 0 {
        return Vec::new();
    }
    let mut emb = CMatrix::zeros(m + n, m + n);
    for i in 0..m {
        for j in 0..n {
            emb[(i, m + j)] = a[(i, j)];
            emb[(m + j, i)] = a[(i, j)].conj();
        }
    }
    let ev = hermitian_eigenvalues(&emb, f64::INFINITY).expect("embedding is Hermitian by construction");
    ev.iter().rev().take(k).map(|&s| s.max(0.0)).collect()
}

/// Sum of singular values.
pub fn trace_norm(a: &CMatrix) -> f64 {
    if a.is_square() && a.is_hermitian(1e-14) {
        if let Ok(ev) = hermitian_eigenvalues(a, HERMITIAN_TOL) {
            return ev.iter().map(|x| x.abs()).sum();
        }
    }
    singular_values(a).iter().sum()
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (br, bc) = (b.rows, b.cols);
    CMatrix::from_fn(a.rows * br, a.cols * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Determinant by LU factorisation with partial pivoting.
pub fn determinant(a: &CMatrix) -> Result<C64, MatError> {
    require_square(a)?;
    let n = a.rows;
    let mut lu = a.clone();
    let mut det = C64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| lu[(x, col)].norm().partial_cmp(&lu[(y, col)].norm()).unwrap())
            .unwrap();
        if lu[(pivot, col)].norm() == 0.0 {
            return Ok(C64::new(0.0, 0.0));
        }
        if pivot != col {
            for j in 0..n {
                let tmp = lu[(col, j)];
                lu[(col, j)] = lu[(pivot, j)];
                lu[(pivot, j)] = tmp;
            }
            det = -det;
        }
        let d = lu[(col, col)];
        det *= d;
        for r in (col + 1)..n {
            let factor = lu[(r, col)] / d;
            if factor.norm() == 0.0 {
                continue;
            }
            for j in col..n {
                let v = lu[(col, j)];
                lu[(r, j)] -= factor * v;
            }
        }
    }
    Ok(det)
}

/// `[m_1, ..., m_up_to]` with `m_k` the determinant of the top-left `k x k`
/// block. Imaginary residue (zero for Hermitian input) is dropped.
pub fn leading_principal_minors(a: &CMatrix, up_to: usize) -> Result<Vec<f64>, MatError> {
    require_square(a)?;
    if up_to > a.rows {
        return Err(MatError::DimensionMismatch(format!(
            "requested {} minors of a {}x{} matrix",
            up_to, a.rows, a.cols
        )));
    }
    (1..=up_to)
        .map(|k| determinant(&a.leading_block(k)).map(|d| d.re))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_eigenvalues() {
        let ev = hermitian_eigenvalues(&CMatrix::identity(3), HERMITIAN_TOL).unwrap();
        assert_eq!(ev, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn flip_matrix_eigenvalues() {
        let a = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let ev = hermitian_eigenvalues(&a, HERMITIAN_TOL).unwrap();
        assert_abs_diff_eq!(ev[0], -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ev[1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn complex_two_by_two() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3
        let a = CMatrix::from_vec(2, 2, vec![c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]).unwrap();
        let ev = hermitian_eigenvalues(&a, HERMITIAN_TOL).unwrap();
        assert_abs_diff_eq!(ev[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ev[1], 3.0, epsilon = 1e-14);
    }

    #[test]
    fn eigen_errors() {
        let rect = CMatrix::zeros(2, 3);
        assert_eq!(
            hermitian_eigenvalues(&rect, HERMITIAN_TOL),
            Err(MatError::NonSquare { rows: 2, cols: 3 })
        );
        let skew = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(
            hermitian_eigenvalues(&skew, HERMITIAN_TOL),
            Err(MatError::NotHermitian { .. })
        ));
        assert_eq!(
            hermitian_eigenvalues(&CMatrix::zeros(4, 4), HERMITIAN_TOL).unwrap(),
            vec![0.0; 4]
        );
    }

    #[test]
    fn singular_values_small() {
        let sv = singular_values(&CMatrix::identity(2));
        assert_abs_diff_eq!(sv[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sv[1], 1.0, epsilon = 1e-15);
        let sv = singular_values(&CMatrix::from_diag(&[3.0, -4.0]));
        assert_abs_diff_eq!(sv[0], 4.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sv[1], 3.0, epsilon = 1e-14);
        // rank one, rectangular: [1 1 1]^T [1 1] has one singular value sqrt(6)
        let ones = CMatrix::from_fn(3, 2, |_, _| c(1.0, 0.0));
        let sv = singular_values(&ones);
        assert_eq!(sv.len(), 2);
        assert_abs_diff_eq!(sv[0], 6f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(sv[1], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn trace_norm_cases() {
        assert_abs_diff_eq!(trace_norm(&CMatrix::from_diag(&[1.0, -2.0])), 3.0, epsilon = 1e-15);
        let rho = CMatrix::from_diag(&[0.5, 0.25, 0.25]);
        assert_abs_diff_eq!(trace_norm(&rho), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn kron_examples() {
        assert_eq!(kron(&CMatrix::identity(3), &CMatrix::identity(3)), CMatrix::identity(9));
        assert_eq!(
            kron(&CMatrix::from_diag(&[1.0, 2.0]), &CMatrix::from_diag(&[3.0, 4.0])),
            CMatrix::from_diag(&[3.0, 4.0, 6.0, 8.0])
        );
        // E_13 (x) I_3 sends |3,k> to |1,k>
        let op = kron(&CMatrix::unit(3, 0, 2), &CMatrix::identity(3));
        for k in 0..3 {
            let ket = CMatrix::from_fn(9, 1, |i, _| if i == 6 + k { c(1.0, 0.0) } else { c(0.0, 0.0) });
            let out = &op * &ket;
            for i in 0..9 {
                let want = if i == k { 1.0 } else { 0.0 };
                assert_eq!(out[(i, 0)], c(want, 0.0));
            }
        }
    }

    #[test]
    fn minors_examples() {
        let m = leading_principal_minors(&CMatrix::from_diag(&[1.0, 2.0, 3.0]), 3).unwrap();
        assert_abs_diff_eq!(m[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m[1], 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m[2], 6.0, epsilon = 1e-15);

        let x = 5.0 / 56.0;
        let a = 41.0 / 56.0;
        let block = CMatrix::from_real_rows(&[&[0.0, x], &[x, a]]);
        let m = leading_principal_minors(&block, 2).unwrap();
        assert_eq!(m[0], 0.0);
        assert_abs_diff_eq!(m[1], -25.0 / 3136.0, epsilon = 1e-16);
        assert!(leading_principal_minors(&block, 3).is_err());
        assert!(leading_principal_minors(&CMatrix::zeros(2, 3), 1).is_err());
    }

    #[test]
    fn determinant_needs_pivoting() {
        let a = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_abs_diff_eq!(determinant(&a).unwrap().re, -1.0, epsilon = 1e-15);
        let b = CMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert_abs_diff_eq!(determinant(&b).unwrap().norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn from_vec_checks_length() {
        assert!(CMatrix::from_vec(2, 2, vec![c(0.0, 0.0); 3]).is_err());
    }
}
