//! Entanglement criteria and measures: negativity (PPT), realignment
//! negativity, the reduction criterion, and the scalar factors that track
//! where those criteria change sign along a trajectory.
//!
//! Distillability is certified only by a violation of the reduction
//! criterion. A negative partial transpose alone clears `is_ppt` but does not
//! claim distillability.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::matkit::{
    determinant, hermitian_eigenvalues, kron, leading_principal_minors, trace_norm, CMatrix, MatError, HERMITIAN_TOL,
};
use crate::qstate::{DensityMatrix, Subsystem};

/// Minimum partial-transpose eigenvalue below `-PPT_TOL` means NPPT.
pub const PPT_TOL: f64 = 1e-10;
/// Reduction negativity above this certifies distillability.
pub const DISTILLABLE_TOL: f64 = 1e-10;
/// Negativities below this are reported as exactly zero.
pub const NEGATIVITY_FLOOR: f64 = 1e-12;
/// Largest off-pattern mass for which the block factorizations still apply.
pub const PATTERN_TOL: f64 = 1e-4;

/// Off-diagonal positions (1-based, upper triangle) that an evolved member of
/// the alpha family may populate when the cross couplings vanish.
pub const EVOLVED_PATTERN: [(usize, usize); 5] = [(1, 5), (1, 9), (5, 9), (3, 7), (6, 8)];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EntanglementError {
    #[error("state leaves the block pattern (off-pattern mass {mass:.3e})")]
    PatternViolation { mass: f64 },
    #[error(transparent)]
    Matrix(#[from] MatError),
}

/// Per-state summary of every criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementReport {
    pub negativity: f64,
    pub realign_negativity: f64,
    pub reduction_negativity: f64,
    pub min_pt_eigenvalue: f64,
    pub is_ppt: bool,
    pub distillable_by_reduction: bool,
    pub factor_f: f64,
    pub factor_g: f64,
    pub factor_h: f64,
    /// `m5..m8`: leading principal minors of `rho_A (x) I - rho`.
    pub minors: [f64; 4],
}

pub const REPORT_CSV_HEADER: &str = "t,N,NR,Nred,isPPT,distillable,F,G,H,m5,m6,m7,m8";

/// 12 significant digits.
pub fn format_sig(v: f64) -> String {
    format!("{v:.11e}")
}

impl EntanglementReport {
    /// One CSV row in [`REPORT_CSV_HEADER`] order.
    pub fn csv_row(&self, t: f64) -> String {
        let mut cols = vec![
            format_sig(t),
            format_sig(self.negativity),
            format_sig(self.realign_negativity),
            format_sig(self.reduction_negativity),
            self.is_ppt.to_string(),
            self.distillable_by_reduction.to_string(),
            format_sig(self.factor_f),
            format_sig(self.factor_g),
            format_sig(self.factor_h),
        ];
        cols.extend(self.minors.iter().map(|&m| format_sig(m)));
        cols.join(",")
    }
}

fn pt_eigenvalues(rho: &DensityMatrix, on: Subsystem) -> Result<Vec<f64>, MatError> {
    hermitian_eigenvalues(&rho.partial_transpose(on), HERMITIAN_TOL)
}

fn clamp_floor(v: f64) -> f64 {
    if v < NEGATIVITY_FLOOR {
        0.0
    } else {
        v
    }
}

/// Sum of the magnitudes of the negative eigenvalues of the partial transpose.
pub fn negativity(rho: &DensityMatrix) -> Result<f64, EntanglementError> {
    negativity_on(rho, Subsystem::B)
}

pub fn negativity_on(rho: &DensityMatrix, on: Subsystem) -> Result<f64, EntanglementError> {
    let ev = pt_eigenvalues(rho, on)?;
    Ok(clamp_floor(-ev.iter().filter(|&&x| x < 0.0).sum::<f64>()))
}

/// `(||rho^PT||_tr - 1) / 2`, the trace-norm route to the same quantity.
pub fn negativity_from_trace_norm(rho: &DensityMatrix) -> f64 {
    clamp_floor((trace_norm(&rho.partial_transpose(Subsystem::B)) - 1.0) / 2.0)
}

pub fn min_pt_eigenvalue(rho: &DensityMatrix) -> Result<f64, EntanglementError> {
    Ok(pt_eigenvalues(rho, Subsystem::B)?[0])
}

/// `max(0, (||R(rho)||_tr - 1) / 2)`
pub fn realignment_negativity(rho: &DensityMatrix) -> f64 {
    ((trace_norm(&rho.realign()) - 1.0) / 2.0).max(0.0)
}

/// `(rho_A (x) I - rho, I (x) rho_B - rho)`
pub fn reduction_matrices(rho: &DensityMatrix) -> (CMatrix, CMatrix) {
    let m = rho.matrix();
    let id_a = CMatrix::identity(rho.dim_a());
    let id_b = CMatrix::identity(rho.dim_b());
    let left = &kron(&rho.partial_trace(Subsystem::A), &id_b) - m;
    let right = &kron(&id_a, &rho.partial_trace(Subsystem::B)) - m;
    (left, right)
}

/// Smallest eigenvalues of the two reduction matrices.
pub fn reduction_min_eigenvalues(rho: &DensityMatrix) -> Result<(f64, f64), EntanglementError> {
    let (left, right) = reduction_matrices(rho);
    let l = hermitian_eigenvalues(&left, HERMITIAN_TOL)?[0];
    let r = hermitian_eigenvalues(&right, HERMITIAN_TOL)?[0];
    Ok((l, r))
}

/// `max(0, -lambda_min)` over both reduction matrices.
pub fn reduction_negativity(rho: &DensityMatrix) -> Result<f64, EntanglementError> {
    let (l, r) = reduction_min_eigenvalues(rho)?;
    Ok(clamp_floor(-l.min(r)))
}

/// Diagonal `r_kk` of `rho_A (x) I - rho`: the population of the A-level
/// block containing `k` minus `rho_kk`. Index 0 holds `r_11`.
pub fn reduction_diagonal(rho: &DensityMatrix) -> [f64; 9] {
    let mut r = [0.0; 9];
    for block in 0..3 {
        let s: f64 = (1..=3).map(|j| rho.pop(3 * block + j)).sum();
        for j in 1..=3 {
            let k = 3 * block + j;
            r[k - 1] = s - rho.pop(k);
        }
    }
    r
}

/// `F = rho11 rho55 rho99 - rho55 |rho37|^2 - rho11 |rho86|^2`, the factor of
/// `det(rho^PT)` whose sign change marks the onset of NPPT.
pub fn pt_factor_f(rho: &DensityMatrix) -> f64 {
    let (p1, p5, p9) = (rho.pop(1), rho.pop(5), rho.pop(9));
    p1 * p5 * p9 - p5 * rho.el(3, 7).norm_sqr() - p1 * rho.el(8, 6).norm_sqr()
}

/// `G = r33 r77 - |rho37|^2` and `H = r66 r88 - |rho68|^2`.
pub fn reduction_factors_gh(rho: &DensityMatrix) -> (f64, f64) {
    let r = reduction_diagonal(rho);
    let g = r[2] * r[6] - rho.el(3, 7).norm_sqr();
    let h = r[5] * r[7] - rho.el(6, 8).norm_sqr();
    (g, h)
}

pub fn factor_h(rho: &DensityMatrix) -> f64 {
    reduction_factors_gh(rho).1
}

/// Frobenius norm of the entries outside the evolved block pattern.
pub fn off_pattern_mass(rho: &DensityMatrix) -> f64 {
    let n = rho.dim();
    let mut mass = 0.0;
    for k in 1..=n {
        for l in 1..=n {
            let allowed = k == l
                || EVOLVED_PATTERN
                    .iter()
                    .any(|&(a, b)| (a, b) == (k, l) || (b, a) == (k, l));
            if !allowed {
                mass += rho.el(k, l).norm_sqr();
            }
        }
    }
    mass.sqrt()
}

/// Determinant of the partial transpose and minors of the reduction matrix,
/// each evaluated directly and through its block factorization.
#[derive(Debug, Clone, PartialEq)]
pub struct PtFactorization {
    pub det_direct: f64,
    pub det_factored: f64,
    /// `[rho22 rho44 - |rho15|^2, rho33 rho77 - |rho19|^2, rho66 rho88 - |rho59|^2, F]`
    pub det_factors: [f64; 4],
    pub minors_direct: [f64; 4],
    pub minors_factored: [f64; 4],
    pub off_pattern_mass: f64,
}

impl PtFactorization {
    pub fn det_discrepancy(&self) -> f64 {
        (self.det_direct - self.det_factored).abs()
    }

    pub fn minors_discrepancy(&self) -> f64 {
        self.minors_direct
            .iter()
            .zip(&self.minors_factored)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub fn pt_minors_and_det(rho: &DensityMatrix) -> Result<PtFactorization, EntanglementError> {
    let mass = off_pattern_mass(rho);
    if mass > PATTERN_TOL {
        return Err(EntanglementError::PatternViolation { mass });
    }
    let p = |k| rho.pop(k);
    let abs2 = |k, l| rho.el(k, l).norm_sqr();

    let det_direct = determinant(&rho.partial_transpose(Subsystem::B))?.re;
    let det_factors = [
        p(2) * p(4) - abs2(1, 5),
        p(3) * p(7) - abs2(1, 9),
        p(6) * p(8) - abs2(5, 9),
        pt_factor_f(rho),
    ];
    let det_factored = det_factors.iter().product();

    let (left, _) = reduction_matrices(rho);
    let m = leading_principal_minors(&left, 8)?;
    let minors_direct = [m[4], m[5], m[6], m[7]];

    let r = reduction_diagonal(rho);
    let r_ = |k: usize| r[k - 1];
    let b15 = r_(1) * r_(5) - abs2(1, 5);
    let (g, h) = reduction_factors_gh(rho);
    let minors_factored = [
        r_(2) * r_(3) * r_(4) * b15,
        r_(2) * r_(3) * r_(4) * r_(6) * b15,
        r_(2) * r_(4) * r_(6) * b15 * g,
        r_(2) * r_(4) * b15 * g * h,
    ];

    Ok(PtFactorization {
        det_direct,
        det_factored,
        det_factors,
        minors_direct,
        minors_factored,
        off_pattern_mass: mass,
    })
}

/// Evaluates every criterion for one state.
pub fn analyze(rho: &DensityMatrix) -> Result<EntanglementReport, EntanglementError> {
    let pt_ev = pt_eigenvalues(rho, Subsystem::B)?;
    let min_pt_eigenvalue = pt_ev[0];
    let negativity = clamp_floor(-pt_ev.iter().filter(|&&x| x < 0.0).sum::<f64>());
    let reduction_negativity = reduction_negativity(rho)?;
    let (factor_g, factor_h) = reduction_factors_gh(rho);
    let (left, _) = reduction_matrices(rho);
    let m = leading_principal_minors(&left, 8)?;
    Ok(EntanglementReport {
        negativity,
        realign_negativity: realignment_negativity(rho),
        reduction_negativity,
        min_pt_eigenvalue,
        is_ppt: min_pt_eigenvalue >= -PPT_TOL,
        distillable_by_reduction: reduction_negativity > DISTILLABLE_TOL,
        factor_f: pt_factor_f(rho),
        factor_g,
        factor_h,
        minors: [m[4], m[5], m[6], m[7]],
    })
}

/// `|<psi| rho |psi>|` for a normalized ket.
pub fn fidelity_with_pure(rho: &DensityMatrix, psi: &[C64]) -> f64 {
    let m = rho.matrix();
    let n = rho.dim();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += psi[i].conj() * m[(i, j)] * psi[j];
        }
    }
    acc.re
}
