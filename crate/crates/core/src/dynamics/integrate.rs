use num_complex::Complex64 as C64;

use crate::entanglement::{analyze, EntanglementError, EntanglementReport};
use crate::matkit::CMatrix;
use crate::qstate::{validate, DensityMatrix, Tolerances};

use super::{CouplingParams, DynamicsError, Generator};

pub const DEFAULT_DT: f64 = 1e-3;
/// Sampling interval used for event brackets, in units of `1/gamma`.
pub const EVENT_SAMPLE_INTERVAL: f64 = 1e-2;
/// Absolute time tolerance of refined events.
pub const EVENT_TIME_TOL: f64 = 1e-4;

/// Per-sample validation thresholds applied during integration.
pub fn integration_tolerances() -> Tolerances {
    Tolerances {
        hermitian: 1e-10,
        trace: 1e-9,
        psd: 1e-8,
    }
}

/// Sampled solution of the master equation.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    reports: Option<Vec<EntanglementReport>>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(f64, &DensityMatrix)> {
        Some((*self.times.last()?, self.states.last()?))
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &DensityMatrix)> {
        self.times.iter().copied().zip(&self.states)
    }

    /// Fills the per-sample reports if not done yet.
    pub fn analyze(&mut self) -> Result<&[EntanglementReport], EntanglementError> {
        if self.reports.is_none() {
            let reps = self.states.iter().map(analyze).collect::<Result<Vec<_>, _>>()?;
            self.reports = Some(reps);
        }
        Ok(self.reports.as_deref().unwrap())
    }

    pub fn reports(&self) -> Option<&[EntanglementReport]> {
        self.reports.as_deref()
    }

    pub fn map<T>(&self, f: impl Fn(&DensityMatrix) -> T) -> Vec<T> {
        self.states.iter().map(f).collect()
    }
}

/// Fixed-step classical RK4 for one coupling configuration.
#[derive(Debug, Clone)]
pub struct Integrator {
    generator: Generator,
    dt: f64,
}

impl Integrator {
    pub fn new(c: &CouplingParams, dt: f64) -> Result<Self, DynamicsError> {
        if dt <= 0.0 || !dt.is_finite() {
            return Err(DynamicsError::InvalidArgument(format!("dt = {dt} must be positive")));
        }
        Ok(Self {
            generator: Generator::new(c)?,
            dt,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    fn rk4_step(&self, v: &mut [C64], h: f64, scratch: &mut Rk4Scratch) {
        let Rk4Scratch { k1, k2, k3, k4, tmp } = scratch;
        let g = &self.generator;
        g.apply_vec(v, k1);
        for i in 0..v.len() {
            tmp[i] = v[i] + k1[i] * (0.5 * h);
        }
        g.apply_vec(tmp, k2);
        for i in 0..v.len() {
            tmp[i] = v[i] + k2[i] * (0.5 * h);
        }
        g.apply_vec(tmp, k3);
        for i in 0..v.len() {
            tmp[i] = v[i] + k3[i] * h;
        }
        g.apply_vec(tmp, k4);
        for i in 0..v.len() {
            v[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0);
        }
    }

    /// Integrates `rho` forward by `duration` with steps no larger than `dt`.
    pub fn advance(&self, rho: &DensityMatrix, duration: f64) -> DensityMatrix {
        let mut v = rho.matrix().data().to_vec();
        if duration > 0.0 {
            let n = (duration / self.dt - 1e-9).ceil().max(1.0) as usize;
            let h = duration / n as f64;
            let mut scratch = Rk4Scratch::new(v.len());
            for _ in 0..n {
                self.rk4_step(&mut v, h, &mut scratch);
            }
        }
        let m = CMatrix::from_vec(9, 9, v).expect("81 entries").hermitian_part();
        DensityMatrix::new_unchecked(rho.dim_a(), rho.dim_b(), m)
    }

    /// Integrates to `t_end`, keeping every `sample_every`-th step plus the
    /// endpoints. Every kept state is re-Hermitized and validated.
    pub fn evolve(&self, rho0: &DensityMatrix, t_end: f64, sample_every: usize) -> Result<Trajectory, DynamicsError> {
        if t_end <= 0.0 || !t_end.is_finite() {
            return Err(DynamicsError::InvalidArgument(format!(
                "t_end = {t_end} must be positive"
            )));
        }
        if sample_every == 0 {
            return Err(DynamicsError::InvalidArgument("sample_every must be at least 1".into()));
        }
        if rho0.dim() != 9 {
            return Err(DynamicsError::InvalidArgument(
                "the generator acts on two qutrits".into(),
            ));
        }
        let tol = integration_tolerances();
        let n_steps = (t_end / self.dt - 1e-9).ceil().max(1.0) as usize;
        let h = t_end / n_steps as f64;

        let mut v = rho0.matrix().data().to_vec();
        let mut scratch = Rk4Scratch::new(v.len());
        let mut times = Vec::with_capacity(n_steps / sample_every + 2);
        let mut states = Vec::with_capacity(n_steps / sample_every + 2);

        for step in 0..=n_steps {
            if step > 0 {
                self.rk4_step(&mut v, h, &mut scratch);
            }
            if step % sample_every == 0 || step == n_steps {
                let t = step as f64 * h;
                let m = CMatrix::from_vec(9, 9, v.clone()).expect("81 entries").hermitian_part();
                v.copy_from_slice(m.data());
                let diag = validate(&m, &tol);
                if !diag.passed() {
                    return Err(DynamicsError::StepTooLarge {
                        t,
                        detail: format!(
                            "trace deviation {:.3e}, min eigenvalue {:.3e}, hermiticity {:.3e}",
                            diag.trace_deviation, diag.min_eigenvalue, diag.hermiticity_residual
                        ),
                    });
                }
                times.push(t);
                states.push(DensityMatrix::new_unchecked(rho0.dim_a(), rho0.dim_b(), m));
            }
        }
        Ok(Trajectory {
            times,
            states,
            reports: None,
        })
    }
}

struct Rk4Scratch {
    k1: Vec<C64>,
    k2: Vec<C64>,
    k3: Vec<C64>,
    k4: Vec<C64>,
    tmp: Vec<C64>,
}

impl Rk4Scratch {
    fn new(n: usize) -> Self {
        let z = vec![C64::new(0.0, 0.0); n];
        Self {
            k1: z.clone(),
            k2: z.clone(),
            k3: z.clone(),
            k4: z.clone(),
            tmp: z,
        }
    }
}

/// One-shot integration with a fresh [`Integrator`].
pub fn evolve(
    rho0: &DensityMatrix,
    c: &CouplingParams,
    t_end: f64,
    dt: f64,
    sample_every: usize,
) -> Result<Trajectory, DynamicsError> {
    Integrator::new(c, dt)?.evolve(rho0, t_end, sample_every)
}
