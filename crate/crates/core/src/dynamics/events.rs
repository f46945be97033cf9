use crate::qstate::DensityMatrix;

use super::integrate::EVENT_TIME_TOL;
use super::{DynamicsError, Integrator, Trajectory};

const MAX_BISECTIONS: usize = 200;

/// Sign of `v`, with zero and NaN mapped to `None`.
fn sign(v: f64) -> Option<bool> {
    if v > 0.0 {
        Some(true)
    } else if v < 0.0 {
        Some(false)
    } else {
        None
    }
}

/// Index pairs `(i, j)` of consecutive nonzero samples with opposite signs.
/// Zero samples are skipped, so a touch of zero is not a crossing.
pub fn sign_change_brackets(values: &[f64]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut last: Option<(usize, bool)> = None;
    for (i, &v) in values.iter().enumerate() {
        if let Some(s) = sign(v) {
            if let Some((j, sj)) = last {
                if sj != s {
                    out.push((j, i));
                }
            }
            last = Some((i, s));
        }
    }
    out
}

impl Integrator {
    /// Earliest sign change of `f` along `traj`, refined by bisection with
    /// fresh integrations started from the left bracketing sample. `None`
    /// when `f` never changes sign on the sampled grid.
    pub fn detect_sign_change(
        &self,
        traj: &Trajectory,
        f: impl Fn(&DensityMatrix) -> f64,
    ) -> Result<Option<f64>, DynamicsError> {
        let values = traj.map(&f);
        let Some(&(i, j)) = sign_change_brackets(&values).first() else {
            return Ok(None);
        };
        let (mut t_lo, mut t_hi) = (traj.times[i], traj.times[j]);
        let mut state_lo = traj.states[i].clone();
        let left_positive = values[i] > 0.0;

        let mut iterations = 0;
        while t_hi - t_lo > EVENT_TIME_TOL {
            iterations += 1;
            if iterations > MAX_BISECTIONS {
                return Err(DynamicsError::RefinementStall { t: 0.5 * (t_lo + t_hi) });
            }
            let mid = 0.5 * (t_lo + t_hi);
            let state_mid = self.advance(&state_lo, mid - t_lo);
            let v = f(&state_mid);
            if v.is_nan() {
                return Err(DynamicsError::RefinementStall { t: mid });
            }
            match sign(v) {
                None => return Ok(Some(mid)),
                Some(s) if s == left_positive => {
                    t_lo = mid;
                    state_lo = state_mid;
                }
                Some(_) => t_hi = mid,
            }
        }
        Ok(Some(0.5 * (t_lo + t_hi)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::CouplingParams;
    use crate::states;
    use approx::assert_abs_diff_eq;

    #[test]
    fn brackets_skip_zeros() {
        assert_eq!(sign_change_brackets(&[1.0, 0.5, -0.1, -0.2]), vec![(1, 2)]);
        assert_eq!(sign_change_brackets(&[1.0, 0.0, -1.0, 0.0, 2.0]), vec![(0, 2), (2, 4)]);
        assert_eq!(sign_change_brackets(&[0.0, 0.0]), vec![]);
        assert_eq!(sign_change_brackets(&[1.0, 0.0, 1.0]), vec![]);
    }

    #[test]
    fn refines_analytic_crossing() {
        // population of |1_A 3_B> decays as exp(-2t); crosses 1/2 at ln 2 / 2
        let integ = Integrator::new(&CouplingParams::independent(1.0), 1e-3).unwrap();
        let traj = integ.evolve(&states::basis_state(3).unwrap(), 1.0, 10).unwrap();
        let t = integ.detect_sign_change(&traj, |r| r.pop(3) - 0.5).unwrap().unwrap();
        assert_abs_diff_eq!(t, 2f64.ln() / 2.0, epsilon = EVENT_TIME_TOL);
    }

    #[test]
    fn no_crossing_gives_none() {
        let integ = Integrator::new(&CouplingParams::independent(1.0), 1e-3).unwrap();
        let traj = integ.evolve(&states::basis_state(3).unwrap(), 1.0, 10).unwrap();
        assert_eq!(integ.detect_sign_change(&traj, |r| r.pop(3)).unwrap(), None);
    }
}
