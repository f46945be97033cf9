#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vatoms::matkit::{kron, CMatrix};
use vatoms::DensityMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> CMatrix {
    random_complex(rng, n, n).hermitian_part()
}

/// Unitary from Gram-Schmidt on a random complex matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> CMatrix {
    let a = random_complex(rng, n, n);
    let mut cols: Vec<Vec<C64>> = Vec::new();
    for j in 0..n {
        let mut v: Vec<C64> = (0..n).map(|i| a[(i, j)]).collect();
        for u in &cols {
            let proj: C64 = u.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= proj * ui;
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|x| x / norm).collect());
    }
    CMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// `G G^dagger / tr` for a `dim x rank` Ginibre matrix.
pub fn random_density(rng: &mut impl Rng, dim: usize, rank: usize) -> CMatrix {
    let g = random_complex(rng, dim, rank);
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    m.scale_re(1.0 / tr).hermitian_part()
}

pub fn random_state(rng: &mut impl Rng) -> DensityMatrix {
    let rank = rng.gen_range(1..=9);
    DensityMatrix::qutrits(random_density(rng, 9, rank)).unwrap()
}

/// Convex mixture of a few random product states.
pub fn random_separable(rng: &mut impl Rng) -> DensityMatrix {
    let terms = rng.gen_range(1..=6);
    let weights: Vec<f64> = (0..terms).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut m = CMatrix::zeros(9, 9);
    for w in weights {
        let ra = rng.gen_range(1..=3);
        let rb = rng.gen_range(1..=3);
        let prod = kron(&random_density(rng, 3, ra), &random_density(rng, 3, rb));
        m = &m + &prod.scale_re(w / total);
    }
    DensityMatrix::qutrits(m.hermitian_part()).unwrap()
}

/// Eigenvalues of a Hermitian matrix from nalgebra's real symmetric solver on
/// the `[[X, -Y], [Y, X]]` embedding (every eigenvalue appears twice).
pub fn oracle_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let n = a.rows();
    let emb = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = a[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let mut ev: Vec<f64> = emb.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}
