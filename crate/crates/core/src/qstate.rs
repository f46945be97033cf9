//! Bipartite density matrices and their structural transforms.
//!
//! Composite basis index for `|i_A> (x) |j_B>` is `dim_b * i + j` (0-based).
//! For two qutrits this is the 1-based `k = 3(i-1) + j` used in all the
//! element formulas elsewhere in the crate; [`DensityMatrix::el`] takes those
//! 1-based indices directly.

use std::fmt::Write as _;

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::matkit::{hermitian_eigenvalues, CMatrix, MatError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("bad shape: {0}")]
    Shape(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Matrix(#[from] MatError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    A,
    B,
}

impl Subsystem {
    pub fn other(self) -> Self {
        match self {
            Subsystem::A => Subsystem::B,
            Subsystem::B => Subsystem::A,
        }
    }
}

/// Acceptance thresholds for a matrix to count as a density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Scale-relative Hermiticity residual.
    pub hermitian: f64,
    /// Absolute deviation of the trace from one.
    pub trace: f64,
    /// Most negative eigenvalue still accepted (as a positive magnitude).
    pub psd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: 1e-10,
            trace: 1e-9,
            psd: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub hermiticity_residual: f64,
    pub trace_deviation: f64,
    pub min_eigenvalue: f64,
    pub hermitian_ok: bool,
    pub trace_ok: bool,
    pub psd_ok: bool,
}

impl Diagnostics {
    pub fn passed(&self) -> bool {
        self.hermitian_ok && self.trace_ok && self.psd_ok
    }

    fn describe_failure(&self) -> String {
        let mut parts = Vec::new();
        if !self.hermitian_ok {
            parts.push(format!("hermiticity residual {:.3e}", self.hermiticity_residual));
        }
        if !self.trace_ok {
            parts.push(format!("trace deviation {:.3e}", self.trace_deviation));
        }
        if !self.psd_ok {
            parts.push(format!("min eigenvalue {:.3e}", self.min_eigenvalue));
        }
        parts.join(", ")
    }
}

/// Checks Hermiticity, unit trace and positivity. Never fails: problems are
/// reported through the flags.
pub fn validate(mat: &CMatrix, tol: &Tolerances) -> Diagnostics {
    if !mat.is_square() {
        return Diagnostics {
            hermiticity_residual: f64::INFINITY,
            trace_deviation: f64::INFINITY,
            min_eigenvalue: f64::NEG_INFINITY,
            hermitian_ok: false,
            trace_ok: false,
            psd_ok: false,
        };
    }
    let hermiticity_residual = mat.hermiticity_residual();
    let hermitian_ok = hermiticity_residual <= tol.hermitian * (1.0 + mat.max_abs());
    let tr = mat.trace();
    let trace_deviation = (tr - C64::new(1.0, 0.0)).norm();
    // Spectrum of the Hermitian part; the residual is reported separately.
    let min_eigenvalue = hermitian_eigenvalues(&mat.hermitian_part(), f64::INFINITY)
        .map(|ev| ev[0])
        .unwrap_or(f64::NAN);
    Diagnostics {
        hermiticity_residual,
        trace_deviation,
        min_eigenvalue,
        hermitian_ok,
        trace_ok: trace_deviation <= tol.trace,
        psd_ok: min_eigenvalue >= -tol.psd,
    }
}

/// A validated bipartite density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim_a: usize,
    dim_b: usize,
    mat: CMatrix,
}

impl DensityMatrix {
    /// Validates with default [`Tolerances`].
    pub fn new(dim_a: usize, dim_b: usize, mat: CMatrix) -> Result<Self, StateError> {
        Self::with_tolerances(dim_a, dim_b, mat, &Tolerances::default())
    }

    pub fn with_tolerances(dim_a: usize, dim_b: usize, mat: CMatrix, tol: &Tolerances) -> Result<Self, StateError> {
        check_shape(dim_a, dim_b, &mat)?;
        let diag = validate(&mat, tol);
        if !diag.passed() {
            return Err(StateError::InvalidState(diag.describe_failure()));
        }
        Ok(Self { dim_a, dim_b, mat })
    }

    /// Two-qutrit state.
    pub fn qutrits(mat: CMatrix) -> Result<Self, StateError> {
        Self::new(3, 3, mat)
    }

    /// Skips validation. For callers that validate separately (the
    /// integrator) or build states that are correct by construction.
    pub fn new_unchecked(dim_a: usize, dim_b: usize, mat: CMatrix) -> Self {
        debug_assert_eq!(mat.rows(), dim_a * dim_b);
        Self { dim_a, dim_b, mat }
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dim(&self) -> usize {
        self.dim_a * self.dim_b
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    /// Element `rho_{kl}` with 1-based composite indices.
    pub fn el(&self, k: usize, l: usize) -> C64 {
        self.mat[(k - 1, l - 1)]
    }

    /// Real part of the diagonal element `rho_{kk}` (1-based).
    pub fn pop(&self, k: usize) -> f64 {
        self.mat[(k - 1, k - 1)].re
    }

    pub fn diagnostics(&self, tol: &Tolerances) -> Diagnostics {
        validate(&self.mat, tol)
    }

    pub fn partial_trace(&self, keep: Subsystem) -> CMatrix {
        partial_trace(&self.mat, self.dim_a, self.dim_b, keep)
    }

    pub fn partial_transpose(&self, on: Subsystem) -> CMatrix {
        partial_transpose(&self.mat, self.dim_a, self.dim_b, on)
    }

    pub fn realign(&self) -> CMatrix {
        realign(&self.mat, self.dim_a, self.dim_b)
    }

    /// Plain-text form: a `dimA dimB` header, then one `k l re im` line per
    /// nonzero entry (1-based indices).
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.dim_a, self.dim_b);
        let n = self.dim();
        for k in 0..n {
            for l in 0..n {
                let z = self.mat[(k, l)];
                if z.re != 0.0 || z.im != 0.0 {
                    writeln!(s, "{} {} {:e} {:e}", k + 1, l + 1, z.re, z.im).unwrap();
                }
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, StateError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or(StateError::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|e| StateError::Parse {
                line: hl + 1,
                msg: e.to_string(),
            })?;
        let [dim_a, dim_b] = dims[..] else {
            return Err(StateError::Parse {
                line: hl + 1,
                msg: "expected 'dimA dimB'".into(),
            });
        };
        let n = dim_a * dim_b;
        let mut mat = CMatrix::zeros(n, n);
        for (ln, line) in lines {
            let perr = |msg: String| StateError::Parse { line: ln + 1, msg };
            let tok: Vec<&str> = line.split_whitespace().collect();
            if tok.len() != 4 {
                return Err(perr(format!("expected 'k l re im', got {} fields", tok.len())));
            }
            let k: usize = tok[0]
                .parse()
                .map_err(|e: std::num::ParseIntError| perr(e.to_string()))?;
            let l: usize = tok[1]
                .parse()
                .map_err(|e: std::num::ParseIntError| perr(e.to_string()))?;
            let re: f64 = tok[2]
                .parse()
                .map_err(|e: std::num::ParseFloatError| perr(e.to_string()))?;
            let im: f64 = tok[3]
                .parse()
                .map_err(|e: std::num::ParseFloatError| perr(e.to_string()))?;
            if k == 0 || l == 0 || k > n || l > n {
                return Err(perr(format!("index ({k}, {l}) outside 1..={n}")));
            }
            mat[(k - 1, l - 1)] = C64::new(re, im);
        }
        Self::new(dim_a, dim_b, mat)
    }
}

fn check_shape(dim_a: usize, dim_b: usize, mat: &CMatrix) -> Result<(), StateError> {
    let n = dim_a * dim_b;
    if n == 0 || mat.rows() != n || mat.cols() != n {
        return Err(StateError::Shape(format!(
            "{}x{} matrix for subsystem dimensions {}x{}",
            mat.rows(),
            mat.cols(),
            dim_a,
            dim_b
        )));
    }
    Ok(())
}

/// Reduced operator on the kept subsystem.
pub fn partial_trace(mat: &CMatrix, dim_a: usize, dim_b: usize, keep: Subsystem) -> CMatrix {
    match keep {
        Subsystem::A => CMatrix::from_fn(dim_a, dim_a, |i, ip| {
            (0..dim_b).map(|j| mat[(i * dim_b + j, ip * dim_b + j)]).sum()
        }),
        Subsystem::B => CMatrix::from_fn(dim_b, dim_b, |j, jp| {
            (0..dim_a).map(|i| mat[(i * dim_b + j, i * dim_b + jp)]).sum()
        }),
    }
}

/// Partial transpose on one subsystem. For `on = B`:
/// `<i,j| T |i',j'> = <i,j'| rho |i',j>`.
pub fn partial_transpose(mat: &CMatrix, dim_a: usize, dim_b: usize, on: Subsystem) -> CMatrix {
    let n = dim_a * dim_b;
    CMatrix::from_fn(n, n, |r, c| {
        let (i, j) = (r / dim_b, r % dim_b);
        let (ip, jp) = (c / dim_b, c % dim_b);
        match on {
            Subsystem::B => mat[(i * dim_b + jp, ip * dim_b + j)],
            Subsystem::A => mat[(ip * dim_b + j, i * dim_b + jp)],
        }
    })
}

/// Realigned matrix `<m,mu| R |n,nu> = <m,n| rho |mu,nu>`, with `m, mu` on
/// subsystem A and `n, nu` on subsystem B. Shape `dim_a^2 x dim_b^2`.
pub fn realign(mat: &CMatrix, dim_a: usize, dim_b: usize) -> CMatrix {
    CMatrix::from_fn(dim_a * dim_a, dim_b * dim_b, |r, c| {
        let (m, mu) = (r / dim_a, r % dim_a);
        let (n, nu) = (c / dim_b, c % dim_b);
        mat[(m * dim_b + n, mu * dim_b + nu)]
    })
}
