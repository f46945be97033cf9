use num_complex::Complex64 as C64;

use crate::matkit::{kron, CMatrix};
use crate::qstate::DensityMatrix;

use super::{CouplingParams, DynamicsError};

const DIM: usize = 9;

/// Transition operators `s_jk^alpha = |j><k|` on one atom, identity on the
/// other. Indexed `[atom][j-1][k-1]`, atom 0 = A.
struct TransitionOps {
    ops: Vec<Vec<Vec<CMatrix>>>,
}

impl TransitionOps {
    fn new() -> Self {
        let id = CMatrix::identity(3);
        let ops = (0..2)
            .map(|atom| {
                (0..3)
                    .map(|j| {
                        (0..3)
                            .map(|k| {
                                let e = CMatrix::unit(3, j, k);
                                if atom == 0 {
                                    kron(&e, &id)
                                } else {
                                    kron(&id, &e)
                                }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self { ops }
    }

    /// 1-based level indices.
    fn s(&self, atom: usize, j: usize, k: usize) -> &CMatrix {
        &self.ops[atom][j - 1][k - 1]
    }
}

/// `2 a rho b - b a rho - rho b a`
fn dissipator_term(a: &CMatrix, b: &CMatrix, rho: &CMatrix) -> CMatrix {
    let ba = b * a;
    let jump = &(&(a * rho) * b).scale_re(2.0) - &(&ba * rho);
    &jump - &(rho * &ba)
}

fn hamiltonian(ops: &TransitionOps, c: &CouplingParams) -> CMatrix {
    let mut h = CMatrix::zeros(DIM, DIM);
    for (k, omega) in [(1, c.omega13), (2, c.omega23)] {
        let exchange = &(ops.s(0, k, 3) * ops.s(1, 3, k)) + &(ops.s(1, k, 3) * ops.s(0, 3, k));
        h = &h + &exchange.scale_re(omega);
    }
    for alpha in 0..2 {
        let other = 1 - alpha;
        let cross = &(ops.s(alpha, 2, 3) * ops.s(other, 3, 1)) + &(ops.s(alpha, 3, 2) * ops.s(other, 1, 3));
        h = &h + &cross.scale_re(c.omega_vc);
    }
    h
}

fn apply_literal(ops: &TransitionOps, h: &CMatrix, c: &CouplingParams, rho: &CMatrix) -> CMatrix {
    // i[H, rho]
    let mut out = h.commutator(rho).scale(C64::new(0.0, 1.0));
    for alpha in 0..2 {
        let other = 1 - alpha;
        for k in 1..=2 {
            let single = dissipator_term(ops.s(alpha, 3, k), ops.s(alpha, k, 3), rho);
            out = &out + &single.scale_re(c.gamma);
            let collective = if k == 1 { c.gamma13 } else { c.gamma23 };
            if collective != 0.0 {
                let term = dissipator_term(ops.s(alpha, 3, k), ops.s(other, k, 3), rho);
                out = &out + &term.scale_re(collective);
            }
        }
        if c.gamma_vc != 0.0 {
            let t1 = dissipator_term(ops.s(alpha, 3, 1), ops.s(other, 2, 3), rho);
            let t2 = dissipator_term(ops.s(alpha, 3, 2), ops.s(other, 1, 3), rho);
            out = &out + &(&t1 + &t2).scale_re(c.gamma_vc);
        }
    }
    out
}

/// Right-hand side of the master equation,
/// `i[H, rho] + (L^A + L^B + L^AB) rho`, evaluated from the operator
/// expressions. Works on any 9x9 matrix, not only states.
pub fn liouvillian_matrix(rho: &CMatrix, c: &CouplingParams) -> Result<CMatrix, DynamicsError> {
    c.check()?;
    if rho.rows() != DIM || rho.cols() != DIM {
        return Err(DynamicsError::InvalidArgument(format!(
            "expected a 9x9 matrix, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    let ops = TransitionOps::new();
    let h = hamiltonian(&ops, c);
    Ok(apply_literal(&ops, &h, c, rho))
}

/// `d rho / dt` for a two-qutrit state.
pub fn liouvillian(rho: &DensityMatrix, c: &CouplingParams) -> Result<CMatrix, DynamicsError> {
    liouvillian_matrix(rho.matrix(), c)
}

/// The generator as a sparse 81x81 superoperator acting on row-major
/// `vec(rho)`, assembled column by column from the operator form.
#[derive(Debug, Clone)]
pub struct Generator {
    couplings: CouplingParams,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    vals: Vec<C64>,
}

impl Generator {
    pub fn new(c: &CouplingParams) -> Result<Self, DynamicsError> {
        c.check()?;
        let ops = TransitionOps::new();
        let h = hamiltonian(&ops, c);
        let n = DIM * DIM;
        let mut dense = vec![C64::new(0.0, 0.0); n * n];
        for col in 0..n {
            let basis = CMatrix::unit(DIM, col / DIM, col % DIM);
            let image = apply_literal(&ops, &h, c, &basis);
            for (row, v) in image.data().iter().enumerate() {
                dense[row * n + col] = *v;
            }
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for row in 0..n {
            for col in 0..n {
                let v = dense[row * n + col];
                if v.re != 0.0 || v.im != 0.0 {
                    col_idx.push(col);
                    vals.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self {
            couplings: *c,
            row_ptr,
            col_idx,
            vals,
        })
    }

    pub fn couplings(&self) -> &CouplingParams {
        &self.couplings
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// `out = L v` on a row-major `vec(rho)`.
    pub fn apply_vec(&self, v: &[C64], out: &mut [C64]) {
        for (row, o) in out.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for idx in self.row_ptr[row]..self.row_ptr[row + 1] {
                acc += self.vals[idx] * v[self.col_idx[idx]];
            }
            *o = acc;
        }
    }

    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let mut out = vec![C64::new(0.0, 0.0); DIM * DIM];
        self.apply_vec(rho.data(), &mut out);
        CMatrix::from_vec(DIM, DIM, out).expect("81 entries")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{couplings, CouplingModel};
    use crate::states::{self, Alpha};
    use approx::assert_abs_diff_eq;

    fn all_models() -> Vec<CouplingParams> {
        let mut v: Vec<CouplingParams> = [
            CouplingModel::Independent,
            CouplingModel::IdealSmallR { omega: 5.0 },
            CouplingModel::Geometric { r_over_lambda: 0.2 },
        ]
        .into_iter()
        .map(|m| couplings(m, 1.0).unwrap())
        .collect();
        v.push(CouplingParams {
            gamma13: 0.3,
            gamma23: 0.2,
            gamma_vc: 0.25,
            omega13: 1.0,
            omega23: 0.7,
            omega_vc: 0.4,
            ..CouplingParams::independent(1.0)
        });
        v
    }

    #[test]
    fn ground_state_is_dark() {
        for c in all_models() {
            let d = liouvillian(&states::ground_state(), &c).unwrap();
            assert_eq!(d.max_abs(), 0.0);
        }
    }

    #[test]
    fn excited_population_decays_at_twice_gamma() {
        let c = CouplingParams::independent(1.0);
        let d = liouvillian(&states::basis_state(3).unwrap(), &c).unwrap();
        assert_abs_diff_eq!(d[(2, 2)].re, -2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d[(8, 8)].re, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn output_is_hermitian_and_traceless() {
        let rho = states::horodecki_alpha(Alpha::new(3.6).unwrap());
        for c in all_models() {
            let d = liouvillian(&rho, &c).unwrap();
            assert!(d.hermiticity_residual() <= 1e-12);
            assert!(d.trace().norm() <= 1e-12);
        }
    }

    #[test]
    fn sparse_matches_operator_form() {
        let rho = states::horodecki_alpha(Alpha::new(3.3).unwrap());
        for c in all_models() {
            let g = Generator::new(&c).unwrap();
            let direct = liouvillian(&rho, &c).unwrap();
            assert!(g.apply(rho.matrix()).max_abs_diff(&direct) <= 1e-14);
            assert!(g.nnz() < 81 * 81 / 4);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let bad = CouplingParams {
            gamma: -1.0,
            ..CouplingParams::independent(1.0)
        };
        assert!(Generator::new(&bad).is_err());
        assert!(liouvillian_matrix(&CMatrix::zeros(3, 3), &CouplingParams::independent(1.0)).is_err());
    }
}
