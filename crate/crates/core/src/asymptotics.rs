//! Stationary states of the zero-separation dynamics.
//!
//! When the collective damping equals the single-atom rate, the antisymmetric
//! single-excitation states `(|13> - |31>)/sqrt 2` and `(|23> - |32>)/sqrt 2`
//! stop radiating and the system relaxes to a mixture of them and the ground
//! state. The asymptote is parameterized by `(x, y, z, w, v, t)`, each a
//! fixed linear combination of the initial matrix elements.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64 as C64;
use num_rational::Rational64;
use num_traits::{FromPrimitive, Zero};
use thiserror::Error;

use crate::dynamics::{liouvillian, CouplingParams, DynamicsError};
use crate::entanglement::{analyze, EntanglementError, EntanglementReport};
use crate::matkit::CMatrix;
use crate::qstate::{DensityMatrix, StateError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsymptoticsError {
    #[error("parameters do not describe a density matrix: {0}")]
    NotAState(StateError),
    #[error("(x, y) = ({x}, {y}) outside x, y >= 0, x + y <= 1/2")]
    OutOfDomain { x: f64, y: f64 },
    #[error(transparent)]
    Entanglement(#[from] EntanglementError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// Parameters of the asymptotic state. `t` is always `1 - 2x - 2y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticParams {
    pub x: f64,
    pub y: f64,
    pub z: C64,
    pub w: C64,
    pub v: C64,
    pub t: f64,
}

impl AsymptoticParams {
    pub fn new(x: f64, y: f64, z: C64, w: C64, v: C64) -> Self {
        Self {
            x,
            y,
            z,
            w,
            v,
            t: 1.0 - 2.0 * x - 2.0 * y,
        }
    }

    /// The class with vanishing coherences `z = w = v = 0`.
    pub fn diagonal(x: f64, y: f64) -> Self {
        let zero = C64::new(0.0, 0.0);
        Self::new(x, y, zero, zero, zero)
    }

    pub fn is_diagonal_class(&self, tol: f64) -> bool {
        self.z.norm() <= tol && self.w.norm() <= tol && self.v.norm() <= tol
    }
}

/// `(x, y, z, w, v, t)` over an arbitrary scalar type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawParams<T> {
    pub x: T,
    pub y: T,
    pub z: T,
    pub w: T,
    pub v: T,
    pub t: T,
}

/// The map from initial matrix elements (1-based `el(k, l)`) to asymptotic
/// parameters. `re` takes the real part.
pub fn asymptotic_map<T, E, R>(el: E, re: R) -> RawParams<T>
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T> + FromPrimitive,
    E: Fn(usize, usize) -> T,
    R: Fn(T) -> T,
{
    let n = |v: i64| T::from_i64(v).expect("small integer");
    let eighth = T::from_f64(0.125).expect("exact");
    let quarter = T::from_f64(0.25).expect("exact");

    let x =
        eighth * (el(2, 2) + n(2) * el(3, 3) + el(4, 4) + n(2) * el(7, 7) - n(2) * re(el(2, 4)) - n(4) * re(el(3, 7)));
    let z = quarter * (el(3, 6) - el(3, 8) - el(7, 6) + el(7, 8));
    let w = quarter * (el(2, 6) + el(2, 8) + n(2) * el(3, 9) - el(4, 6) - el(4, 8) - n(2) * el(7, 9));
    let y =
        eighth * (el(2, 2) + el(4, 4) + n(2) * el(6, 6) + n(2) * el(8, 8) - n(2) * re(el(2, 4)) - n(4) * re(el(6, 8)));
    let v = quarter * (-el(2, 3) - el(2, 7) + el(4, 3) + el(4, 7) + n(2) * el(6, 9) - n(2) * el(8, 9));
    let t = n(1) - n(2) * x - n(2) * y;
    RawParams { x, y, z, w, v, t }
}

pub fn asymptotic_params(rho0: &DensityMatrix) -> AsymptoticParams {
    let raw = asymptotic_map(|k, l| rho0.el(k, l), |c: C64| C64::new(c.re, 0.0));
    AsymptoticParams {
        x: raw.x.re,
        y: raw.y.re,
        z: raw.z,
        w: raw.w,
        v: raw.v,
        t: raw.t.re,
    }
}

/// The same map in exact arithmetic for a real rational matrix (0-based
/// storage).
pub fn asymptotic_params_exact(m: &[[Rational64; 9]; 9]) -> RawParams<Rational64> {
    asymptotic_map(|k, l| m[k - 1][l - 1], |q| q)
}

/// Assembles the 9x9 asymptotic matrix without validating it.
pub fn asymptotic_matrix(p: &AsymptoticParams) -> CMatrix {
    let mut m = CMatrix::zeros(9, 9);
    let r = |v: f64| C64::new(v, 0.0);
    let mut set = |k: usize, l: usize, v: C64| m[(k - 1, l - 1)] = v;
    let (x, y, z, w, v, t) = (r(p.x), r(p.y), p.z, p.w, p.v, r(p.t));
    let (zc, wc, vc) = (z.conj(), w.conj(), v.conj());

    set(3, 3, x);
    set(3, 6, z);
    set(3, 7, -x);
    set(3, 8, -z);
    set(3, 9, w);

    set(6, 3, zc);
    set(6, 6, y);
    set(6, 7, -zc);
    set(6, 8, -y);
    set(6, 9, v);

    set(7, 3, -x);
    set(7, 6, -z);
    set(7, 7, x);
    set(7, 8, z);
    set(7, 9, -w);

    set(8, 3, -zc);
    set(8, 6, -y);
    set(8, 7, zc);
    set(8, 8, y);
    set(8, 9, -v);

    set(9, 3, wc);
    set(9, 6, vc);
    set(9, 7, -wc);
    set(9, 8, -vc);
    set(9, 9, t);
    m
}

pub fn build_asymptotic_state(p: &AsymptoticParams) -> Result<DensityMatrix, AsymptoticsError> {
    DensityMatrix::qutrits(asymptotic_matrix(p)).map_err(AsymptoticsError::NotAState)
}

fn check_domain(x: f64, y: f64) -> Result<(), AsymptoticsError> {
    if x >= 0.0 && y >= 0.0 && x + y <= 0.5 + 1e-15 {
        Ok(())
    } else {
        Err(AsymptoticsError::OutOfDomain { x, y })
    }
}

/// Negativity of the diagonal-class asymptote,
/// `(sqrt(4(x^2 + y^2) + t^2) - t) / 2`.
pub fn asymptotic_negativity_diagonal(x: f64, y: f64) -> Result<f64, AsymptoticsError> {
    check_domain(x, y)?;
    let t = 1.0 - 2.0 * x - 2.0 * y;
    Ok(0.5 * ((4.0 * (x * x + y * y) + t * t).sqrt() - t))
}

/// `rho_A (x) I - rho` of the diagonal-class asymptote, written out.
pub fn reduction_matrix_closed_form(x: f64, y: f64) -> Result<CMatrix, AsymptoticsError> {
    check_domain(x, y)?;
    let a = 1.0 - 2.0 * x - y;
    let b = 1.0 - x - 2.0 * y;
    let c = x + y;
    let mut m = CMatrix::zeros(9, 9);
    let mut set = |k: usize, l: usize, v: f64| m[(k - 1, l - 1)] = C64::new(v, 0.0);
    set(1, 1, x);
    set(2, 2, x);
    set(3, 7, x);
    set(4, 4, y);
    set(5, 5, y);
    set(6, 8, y);
    set(7, 3, x);
    set(7, 7, a);
    set(8, 6, y);
    set(8, 8, b);
    set(9, 9, c);
    Ok(m)
}

/// Smallest eigenvalue of the closed-form reduction matrix: the lower
/// eigenvalue of the `[[0, x], [x, a]]` or `[[0, y], [y, b]]` block.
pub fn reduction_min_eigenvalue_closed_form(x: f64, y: f64) -> Result<f64, AsymptoticsError> {
    check_domain(x, y)?;
    let a = 1.0 - 2.0 * x - y;
    let b = 1.0 - x - 2.0 * y;
    let lo = |off: f64, d: f64| 0.5 * (d - (d * d + 4.0 * off * off).sqrt());
    // the remaining diagonal entries x, y, x + y are non-negative
    Ok(lo(x, a).min(lo(y, b)).min(0.0))
}

/// `max |L(rho_as)|` entrywise: zero when the assembled state is stationary
/// under the given couplings.
pub fn stationarity_residual(p: &AsymptoticParams, c: &CouplingParams) -> Result<f64, AsymptoticsError> {
    let rho = build_asymptotic_state(p)?;
    Ok(liouvillian(&rho, c)?.max_abs())
}

/// Everything reported for an initial state's asymptote.
#[derive(Debug, Clone)]
pub struct AsymptoteSummary {
    pub params: AsymptoticParams,
    pub state: DensityMatrix,
    pub report: EntanglementReport,
}

pub fn summarize(rho0: &DensityMatrix) -> Result<AsymptoteSummary, AsymptoticsError> {
    let params = asymptotic_params(rho0);
    let state = build_asymptotic_state(&params)?;
    let report = analyze(&state)?;
    Ok(AsymptoteSummary { params, state, report })
}

/// True when every exact parameter equals the given rationals.
pub fn exact_matches(raw: &RawParams<Rational64>, x: Rational64, y: Rational64, t: Rational64) -> bool {
    raw.x == x && raw.y == y && raw.t == t && raw.z.is_zero() && raw.w.is_zero() && raw.v.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{couplings, CouplingModel};
    use crate::entanglement::{negativity, reduction_matrices, reduction_negativity};
    use crate::states::{self, Alpha};
    use approx::assert_abs_diff_eq;

    #[test]
    fn alpha_family_asymptote() {
        for a in [3.1, 3.6, 4.0] {
            let p = asymptotic_params(&states::horodecki_alpha(Alpha::new(a).unwrap()));
            assert_abs_diff_eq!(p.x, 5.0 / 56.0, epsilon = 1e-15);
            assert_abs_diff_eq!(p.y, 5.0 / 56.0, epsilon = 1e-15);
            assert_abs_diff_eq!(p.t, 9.0 / 14.0, epsilon = 1e-15);
            assert!(p.is_diagonal_class(0.0));
        }
    }

    #[test]
    fn exact_alpha_asymptote() {
        let raw = asymptotic_params_exact(&states::horodecki_alpha_exact(Rational64::new(39, 10)));
        assert!(exact_matches(
            &raw,
            Rational64::new(5, 56),
            Rational64::new(5, 56),
            Rational64::new(9, 14)
        ));
    }

    #[test]
    fn basis_asymptotes() {
        let p = asymptotic_params(&states::ground_state());
        assert_eq!((p.x, p.y, p.t), (0.0, 0.0, 1.0));
        assert_eq!(build_asymptotic_state(&p).unwrap(), states::ground_state());
        let p = asymptotic_params(&states::basis_state(3).unwrap());
        assert_eq!((p.x, p.y, p.t), (0.25, 0.0, 0.5));
    }

    #[test]
    fn quarter_asymptote_negativity() {
        let want = (2f64.sqrt() - 1.0) / 4.0;
        assert_abs_diff_eq!(
            asymptotic_negativity_diagonal(0.25, 0.0).unwrap(),
            want,
            epsilon = 1e-15
        );
        let rho = build_asymptotic_state(&AsymptoticParams::diagonal(0.25, 0.0)).unwrap();
        assert_abs_diff_eq!(negativity(&rho).unwrap(), want, epsilon = 1e-12);
        assert_abs_diff_eq!(
            reduction_min_eigenvalue_closed_form(0.25, 0.0).unwrap(),
            (1.0 - 2f64.sqrt()) / 4.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn headline_values() {
        let x = 5.0 / 56.0;
        assert_abs_diff_eq!(asymptotic_negativity_diagonal(x, x).unwrap(), 0.0239121, epsilon = 5e-8);
        let rho = build_asymptotic_state(&AsymptoticParams::diagonal(x, x)).unwrap();
        assert_abs_diff_eq!(
            reduction_negativity(&rho).unwrap(),
            (1781f64.sqrt() - 41.0) / 112.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!((1781f64.sqrt() - 41.0) / 112.0, 0.010731, epsilon = 5e-7);
    }

    #[test]
    fn closed_form_reduction_matches_generic() {
        for (x, y) in [(0.0, 0.0), (5.0 / 56.0, 5.0 / 56.0), (0.25, 0.0), (0.1, 0.3)] {
            let rho = build_asymptotic_state(&AsymptoticParams::diagonal(x, y)).unwrap();
            let (left, _) = reduction_matrices(&rho);
            assert!(left.max_abs_diff(&reduction_matrix_closed_form(x, y).unwrap()) <= 1e-15);
        }
    }

    #[test]
    fn domain_errors() {
        assert!(asymptotic_negativity_diagonal(-0.1, 0.0).is_err());
        assert!(asymptotic_negativity_diagonal(0.3, 0.3).is_err());
        assert!(reduction_matrix_closed_form(0.6, 0.0).is_err());
        let bad = AsymptoticParams::new(0.1, 0.1, C64::new(0.5, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        assert!(matches!(
            build_asymptotic_state(&bad),
            Err(AsymptoticsError::NotAState(_))
        ));
    }

    #[test]
    fn diagonal_class_is_stationary_at_small_r() {
        let c = couplings(CouplingModel::IdealSmallR { omega: 5.0 }, 1.0).unwrap();
        let r = stationarity_residual(&AsymptoticParams::diagonal(5.0 / 56.0, 5.0 / 56.0), &c).unwrap();
        assert!(r <= 1e-12, "{r}");
    }

    #[test]
    fn idempotent_on_diagonal_class() {
        let p = AsymptoticParams::diagonal(0.12, 0.2);
        let q = asymptotic_params(&build_asymptotic_state(&p).unwrap());
        assert_abs_diff_eq!(q.x, p.x, epsilon = 1e-15);
        assert_abs_diff_eq!(q.y, p.y, epsilon = 1e-15);
        assert_abs_diff_eq!(q.t, p.t, epsilon = 1e-15);
    }
}
