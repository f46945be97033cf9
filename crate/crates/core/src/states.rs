//! Initial-state catalog for the two-qutrit system.
//!
//! Levels 1 and 2 are the excited states of each atom and 3 is the ground
//! state, so `basis:9` is `|3_A 3_B>`.

use num_complex::Complex64 as C64;
use num_rational::Rational64;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::matkit::CMatrix;
use crate::qstate::{DensityMatrix, StateError};

/// 1-based composite indices of `|1 1>, |2 2>, |3 3>`.
pub const PSI0_SUPPORT: [usize; 3] = [1, 5, 9];
/// `|1_A 2_B>, |2_A 3_B>, |3_A 1_B>`
pub const P_PLUS_SUPPORT: [usize; 3] = [2, 6, 7];
/// `|2_A 1_B>, |3_A 2_B>, |1_A 3_B>`
pub const P_MINUS_SUPPORT: [usize; 3] = [4, 8, 3];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("alpha = {0} outside the bound-entangled window (3, 4]")]
    AlphaOutOfRange(f64),
    #[error("bad probability vector: {0}")]
    BadProbabilityVector(String),
    #[error("unknown state '{0}'")]
    UnknownState(String),
    #[error(transparent)]
    State(#[from] StateError),
}

/// Mixing parameter of the bound-entangled family, restricted to `(3, 4]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Alpha(f64);

impl Alpha {
    pub fn new(alpha: f64) -> Result<Self, CatalogError> {
        if alpha > 3.0 && alpha <= 4.0 {
            Ok(Self(alpha))
        } else {
            Err(CatalogError::AlphaOutOfRange(alpha))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

fn diag_with(support: &[usize], weight: f64) -> CMatrix {
    let mut m = CMatrix::zeros(9, 9);
    for &k in support {
        m[(k - 1, k - 1)] = C64::new(weight, 0.0);
    }
    m
}

/// Projector onto `(|11> + |22> + |33>) / sqrt(3)`.
pub fn psi0() -> DensityMatrix {
    let mut m = CMatrix::zeros(9, 9);
    for &k in &PSI0_SUPPORT {
        for &l in &PSI0_SUPPORT {
            m[(k - 1, l - 1)] = C64::new(1.0 / 3.0, 0.0);
        }
    }
    DensityMatrix::new_unchecked(3, 3, m)
}

pub fn p_plus() -> DensityMatrix {
    DensityMatrix::new_unchecked(3, 3, diag_with(&P_PLUS_SUPPORT, 1.0 / 3.0))
}

pub fn p_minus() -> DensityMatrix {
    DensityMatrix::new_unchecked(3, 3, diag_with(&P_MINUS_SUPPORT, 1.0 / 3.0))
}

fn horodecki_matrix(alpha: f64) -> CMatrix {
    let psi = psi0().into_matrix().scale_re(2.0 / 7.0);
    let plus = p_plus().into_matrix().scale_re(alpha / 7.0);
    let minus = p_minus().into_matrix().scale_re((5.0 - alpha) / 7.0);
    &(&psi + &plus) + &minus
}

/// `(2/7)|Psi0><Psi0| + (alpha/7) P+ + ((5 - alpha)/7) P-`, PPT and
/// entangled on the whole window.
pub fn horodecki_alpha(alpha: Alpha) -> DensityMatrix {
    DensityMatrix::new_unchecked(3, 3, horodecki_matrix(alpha.0))
}

/// Same family for any alpha; a valid state only for `0 <= alpha <= 5`.
pub fn horodecki_alpha_unchecked(alpha: f64) -> Result<DensityMatrix, CatalogError> {
    Ok(DensityMatrix::qutrits(horodecki_matrix(alpha))?)
}

/// Exact rational entries of the alpha family (real-valued), 0-based.
pub fn horodecki_alpha_exact(alpha: Rational64) -> [[Rational64; 9]; 9] {
    let mut m = [[Rational64::zero(); 9]; 9];
    let seventh = Rational64::new(1, 7);
    let third = Rational64::new(1, 3);
    for &k in &PSI0_SUPPORT {
        for &l in &PSI0_SUPPORT {
            m[k - 1][l - 1] = Rational64::from_integer(2) * seventh * third;
        }
    }
    for &k in &P_PLUS_SUPPORT {
        m[k - 1][k - 1] = alpha * seventh * third;
    }
    for &k in &P_MINUS_SUPPORT {
        m[k - 1][k - 1] = (Rational64::from_integer(5) - alpha) * seventh * third;
    }
    debug_assert_eq!((0..9).map(|k| m[k][k]).sum::<Rational64>(), Rational64::one());
    m
}

/// Diagonal state with the given basis populations.
pub fn diagonal_state(p: &[f64]) -> Result<DensityMatrix, CatalogError> {
    if p.len() != 9 {
        return Err(CatalogError::BadProbabilityVector(format!(
            "expected 9 entries, got {}",
            p.len()
        )));
    }
    if let Some(bad) = p.iter().find(|&&x| x < 0.0 || !x.is_finite()) {
        return Err(CatalogError::BadProbabilityVector(format!(
            "entry {bad} is not a probability"
        )));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(CatalogError::BadProbabilityVector(format!("entries sum to {total}")));
    }
    Ok(DensityMatrix::new_unchecked(3, 3, CMatrix::from_diag(p)))
}

/// `|i_A j_B>` projector for 1-based composite index `k`.
pub fn basis_state(k: usize) -> Result<DensityMatrix, CatalogError> {
    if !(1..=9).contains(&k) {
        return Err(CatalogError::UnknownState(format!("basis:{k}")));
    }
    Ok(DensityMatrix::new_unchecked(3, 3, CMatrix::unit(9, k - 1, k - 1)))
}

pub fn ground_state() -> DensityMatrix {
    basis_state(9).expect("index 9 is in range")
}

/// Resolves catalog names: `psi0`, `pplus`, `pminus`, `horodecki:α=3.6`
/// (also `alpha=3.6` or a bare number), `diag:p1,...,p9`, `basis:k`.
pub fn resolve(name: &str) -> Result<DensityMatrix, CatalogError> {
    let name = name.trim();
    let unknown = || CatalogError::UnknownState(name.to_string());
    let (head, arg) = match name.split_once(':') {
        Some((h, a)) => (h.trim(), Some(a.trim())),
        None => (name, None),
    };
    match (head, arg) {
        ("psi0", None) => Ok(psi0()),
        ("pplus", None) => Ok(p_plus()),
        ("pminus", None) => Ok(p_minus()),
        ("horodecki", Some(a)) => {
            let value = a.rsplit('=').next().unwrap_or(a).trim();
            let alpha: f64 = value.parse().map_err(|_| unknown())?;
            Ok(horodecki_alpha(Alpha::new(alpha)?))
        }
        ("diag", Some(a)) => {
            let p: Vec<f64> = a
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| CatalogError::BadProbabilityVector(e.to_string()))?;
            diagonal_state(&p)
        }
        ("basis", Some(a)) => basis_state(a.parse().map_err(|_| unknown())?),
        _ => Err(unknown()),
    }
}
