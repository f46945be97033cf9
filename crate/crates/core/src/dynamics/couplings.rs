use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::matkit::{hermitian_eigenvalues, CMatrix};

use super::DynamicsError;

/// Default dipole-dipole shift for [`CouplingModel::IdealSmallR`], in units of
/// `gamma`. The true shift diverges as the separation goes to zero.
pub const DEFAULT_SMALL_R_OMEGA: f64 = 5.0;

/// Rates and shifts entering the two-atom generator. All in units where the
/// single-atom rate `gamma` is the time scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingParams {
    /// Single-atom rate for both excited levels.
    pub gamma: f64,
    /// Collective damping of the `1 <-> 3` transitions.
    pub gamma13: f64,
    /// Collective damping of the `2 <-> 3` transitions.
    pub gamma23: f64,
    /// Cross damping between orthogonal dipoles of different atoms.
    pub gamma_vc: f64,
    pub omega13: f64,
    pub omega23: f64,
    pub omega_vc: f64,
    /// Transition frequency. Metadata only: the generator is written in the
    /// frame rotating at this frequency.
    pub omega0: f64,
}

impl CouplingParams {
    /// Uncoupled atoms with rate `gamma`.
    pub fn independent(gamma: f64) -> Self {
        Self {
            gamma,
            gamma13: 0.0,
            gamma23: 0.0,
            gamma_vc: 0.0,
            omega13: 0.0,
            omega23: 0.0,
            omega_vc: 0.0,
            omega0: 0.0,
        }
    }

    /// Damping (Kossakowski) matrix over the jump operators
    /// `(s31_A, s32_A, s31_B, s32_B)`.
    pub fn damping_matrix(&self) -> CMatrix {
        let g = self.gamma;
        CMatrix::from_real_rows(&[
            &[g, 0.0, self.gamma13, self.gamma_vc],
            &[0.0, g, self.gamma_vc, self.gamma23],
            &[self.gamma13, self.gamma_vc, g, 0.0],
            &[self.gamma_vc, self.gamma23, 0.0, g],
        ])
    }

    /// Complete positivity: `gamma > 0`, every collective rate bounded by
    /// `gamma` and the damping matrix positive semidefinite.
    pub fn check(&self) -> Result<(), DynamicsError> {
        let all = [
            self.gamma,
            self.gamma13,
            self.gamma23,
            self.gamma_vc,
            self.omega13,
            self.omega23,
            self.omega_vc,
            self.omega0,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(DynamicsError::BadCouplings("non-finite coefficient".into()));
        }
        if self.gamma <= 0.0 {
            return Err(DynamicsError::BadCouplings(format!(
                "gamma = {} must be positive",
                self.gamma
            )));
        }
        let slack = 1e-12 * self.gamma;
        for (name, v) in [
            ("Gamma13", self.gamma13),
            ("Gamma23", self.gamma23),
            ("Gamma_vc", self.gamma_vc),
        ] {
            if v.abs() > self.gamma + slack {
                return Err(DynamicsError::BadCouplings(format!(
                    "|{name}| = {} exceeds gamma = {}",
                    v.abs(),
                    self.gamma
                )));
            }
        }
        let ev = hermitian_eigenvalues(&self.damping_matrix(), 1e-12)
            .map_err(|e| DynamicsError::BadCouplings(e.to_string()))?;
        if ev[0] < -slack {
            return Err(DynamicsError::BadCouplings(format!(
                "damping matrix not positive semidefinite (min eigenvalue {:.3e})",
                ev[0]
            )));
        }
        Ok(())
    }
}

impl fmt::Display for CouplingParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "gamma={}", self.gamma)?;
        writeln!(f, "Gamma13={}", self.gamma13)?;
        writeln!(f, "Gamma23={}", self.gamma23)?;
        writeln!(f, "Gamma_vc={}", self.gamma_vc)?;
        writeln!(f, "Omega13={}", self.omega13)?;
        writeln!(f, "Omega23={}", self.omega23)?;
        writeln!(f, "Omega_vc={}", self.omega_vc)?;
        write!(f, "omega0={}", self.omega0)
    }
}

/// How the collective coefficients depend on the atomic separation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CouplingModel {
    /// No photon exchange.
    Independent,
    /// Zero-separation limit of the damping (`Gamma = gamma`) with a finite,
    /// user-chosen dipole-dipole shift.
    IdealSmallR { omega: f64 },
    /// Parallel dipoles perpendicular to the separation axis, separation given
    /// in wavelengths. Cross couplings vanish in this geometry.
    Geometric { r_over_lambda: f64 },
}

impl FromStr for CouplingModel {
    type Err = DynamicsError;

    /// `independent`, `ideal` / `ideal:omega=5`, `geometric:R=0.2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h.trim(), Some(a.trim())),
            None => (s, None),
        };
        let value = |a: &str| -> Result<f64, DynamicsError> {
            a.rsplit('=')
                .next()
                .unwrap_or(a)
                .trim()
                .parse()
                .map_err(|_| DynamicsError::InvalidArgument(format!("bad model parameter in '{s}'")))
        };
        match (head.to_ascii_lowercase().as_str(), arg) {
            ("independent", None) => Ok(CouplingModel::Independent),
            ("ideal" | "idealsmallr", None) => Ok(CouplingModel::IdealSmallR {
                omega: DEFAULT_SMALL_R_OMEGA,
            }),
            ("ideal" | "idealsmallr", Some(a)) => Ok(CouplingModel::IdealSmallR { omega: value(a)? }),
            ("geometric", Some(a)) => Ok(CouplingModel::Geometric {
                r_over_lambda: value(a)?,
            }),
            _ => Err(DynamicsError::InvalidArgument(format!("unknown coupling model '{s}'"))),
        }
    }
}

/// Collective damping for separation `a = 2 pi R / lambda`, in units of gamma.
pub fn collective_damping(a: f64) -> f64 {
    1.5 * (a.sin() / a + a.cos() / (a * a) - a.sin() / (a * a * a))
}

/// Dipole-dipole shift for separation `a = 2 pi R / lambda`, in units of gamma.
pub fn dipole_shift(a: f64) -> f64 {
    0.75 * (-a.cos() / a + a.sin() / (a * a) + a.cos() / (a * a * a))
}

/// Coefficients of a model for single-atom rate `gamma`.
pub fn couplings(model: CouplingModel, gamma: f64) -> Result<CouplingParams, DynamicsError> {
    let base = CouplingParams::independent(gamma);
    let params = match model {
        CouplingModel::Independent => base,
        CouplingModel::IdealSmallR { omega } => CouplingParams {
            gamma13: gamma,
            gamma23: gamma,
            omega13: omega * gamma,
            omega23: omega * gamma,
            ..base
        },
        CouplingModel::Geometric { r_over_lambda } => {
            if r_over_lambda <= 0.0 || !r_over_lambda.is_finite() {
                return Err(DynamicsError::BadGeometry(r_over_lambda));
            }
            let a = 2.0 * PI * r_over_lambda;
            let g = gamma * collective_damping(a);
            let o = gamma * dipole_shift(a);
            CouplingParams {
                gamma13: g,
                gamma23: g,
                omega13: o,
                omega23: o,
                ..base
            }
        }
    };
    params.check()?;
    Ok(params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn small_separation_limit() {
        let c = couplings(CouplingModel::Geometric { r_over_lambda: 1e-3 }, 1.0).unwrap();
        assert!((c.gamma13 - 1.0).abs() < 1e-5, "{}", c.gamma13);
        assert!(c.omega13 > 1e6);
    }

    #[test]
    fn large_separation_limit() {
        let c = couplings(CouplingModel::Geometric { r_over_lambda: 10.0 }, 1.0).unwrap();
        assert!(c.gamma13.abs() < 0.05);
        assert!(c.omega13.abs() < 0.05);
    }

    #[test]
    fn fifth_wavelength_values() {
        // a = 0.4 pi; evaluated term by term
        let a = 0.4 * PI;
        let (s, co) = (a.sin(), a.cos());
        let g = 1.5 * (s / a + co / a.powi(2) - s / a.powi(3));
        let o = 0.75 * (-co / a + s / a.powi(2) + co / a.powi(3));
        let c = couplings(CouplingModel::Geometric { r_over_lambda: 0.2 }, 1.0).unwrap();
        assert_abs_diff_eq!(c.gamma13, g, epsilon = 1e-15);
        assert_abs_diff_eq!(c.gamma13, 0.70987, epsilon = 5e-5);
        assert_abs_diff_eq!(c.omega13, o, epsilon = 1e-15);
        assert_abs_diff_eq!(c.omega13, 0.38406, epsilon = 5e-5);
        assert_eq!((c.gamma_vc, c.omega_vc), (0.0, 0.0));
    }

    #[test]
    fn model_presets() {
        let c = couplings(CouplingModel::Independent, 2.0).unwrap();
        assert_eq!(c, CouplingParams::independent(2.0));
        let c = couplings(CouplingModel::IdealSmallR { omega: 5.0 }, 1.0).unwrap();
        assert_eq!((c.gamma13, c.gamma23, c.gamma_vc), (1.0, 1.0, 0.0));
        assert_eq!((c.omega13, c.omega23, c.omega_vc), (5.0, 5.0, 0.0));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            couplings(CouplingModel::Geometric { r_over_lambda: 0.0 }, 1.0),
            Err(DynamicsError::BadGeometry(_))
        ));
        assert!(matches!(
            couplings(CouplingModel::Geometric { r_over_lambda: -1.0 }, 1.0),
            Err(DynamicsError::BadGeometry(_))
        ));
        assert!(couplings(CouplingModel::Independent, 0.0).is_err());
        let c = CouplingParams {
            gamma13: 1.1,
            ..CouplingParams::independent(1.0)
        };
        assert!(c.check().is_err());
        // each rate within bounds but the damping matrix is indefinite
        let c = CouplingParams {
            gamma13: 0.9,
            gamma23: 0.9,
            gamma_vc: 0.9,
            ..CouplingParams::independent(1.0)
        };
        assert!(c.check().is_err());
        // degenerate but allowed
        let c = CouplingParams {
            gamma13: 1.0,
            gamma23: 1.0,
            ..CouplingParams::independent(1.0)
        };
        assert!(c.check().is_ok());
    }

    #[test]
    fn parse_models() {
        assert_eq!(
            "independent".parse::<CouplingModel>().unwrap(),
            CouplingModel::Independent
        );
        assert_eq!(
            "ideal".parse::<CouplingModel>().unwrap(),
            CouplingModel::IdealSmallR { omega: 5.0 }
        );
        assert_eq!(
            "ideal:omega=2".parse::<CouplingModel>().unwrap(),
            CouplingModel::IdealSmallR { omega: 2.0 }
        );
        assert_eq!(
            "geometric:R=0.2".parse::<CouplingModel>().unwrap(),
            CouplingModel::Geometric { r_over_lambda: 0.2 }
        );
        assert!("geometric".parse::<CouplingModel>().is_err());
        assert!("geometric:R=x".parse::<CouplingModel>().is_err());
        assert!("thermal".parse::<CouplingModel>().is_err());
    }
}
