mod common;

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use vatoms::matkit::*;

fn ev(a: &CMatrix) -> Vec<f64> {
    hermitian_eigenvalues(a, HERMITIAN_TOL).unwrap()
}

#[test]
fn eigenvalues_match_nalgebra_oracle() {
    let mut rng = common::rng(7);
    for n in [1, 2, 3, 5, 9, 16] {
        for _ in 0..5 {
            let a = common::random_hermitian(&mut rng, n);
            let got = ev(&a);
            let want = common::oracle_eigenvalues(&a);
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).abs() <= 1e-12, "n={n}: {g} vs {w}");
            }
        }
    }
}

#[test]
fn degenerate_spectrum() {
    // U diag(1, 1, 1, -2, -2) U^dagger
    let mut rng = common::rng(8);
    let u = common::random_unitary(&mut rng, 5);
    let d = CMatrix::from_diag(&[1.0, 1.0, 1.0, -2.0, -2.0]);
    let a = &(&u * &d) * &u.adjoint();
    let got = ev(&a.hermitian_part());
    let want = [-2.0, -2.0, 1.0, 1.0, 1.0];
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() <= 1e-13);
    }
}

#[test]
fn eighty_one_dimensional() {
    let mut rng = common::rng(9);
    let a = common::random_hermitian(&mut rng, 81);
    let got = ev(&a);
    let sum: f64 = got.iter().sum();
    assert!((sum - a.trace().re).abs() <= 1e-10 * 81.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigen_sum_and_product(seed in any::<u64>(), n in 1usize..=16) {
        let mut rng = common::rng(seed);
        let a = common::random_hermitian(&mut rng, n);
        let e = ev(&a);
        let sum: f64 = e.iter().sum();
        prop_assert!((sum - a.trace().re).abs() <= 1e-9 * n as f64);
        let prod: f64 = e.iter().product();
        let det = determinant(&a).unwrap();
        prop_assert!((prod - det.re).abs() <= 1e-9 * n as f64 * (1.0 + det.norm()));
        prop_assert!(det.im.abs() <= 1e-9 * (1.0 + det.norm()));
    }

    #[test]
    fn trace_norm_unitary_invariance(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = common::rng(seed);
        let a = common::random_complex(&mut rng, n, n);
        let u = common::random_unitary(&mut rng, n);
        let v = common::random_unitary(&mut rng, n);
        let b = &(&u * &a) * &v;
        prop_assert!((trace_norm(&a) - trace_norm(&b)).abs() <= 1e-9);
    }

    #[test]
    fn singular_values_of_hermitian(seed in any::<u64>(), n in 1usize..=10) {
        let mut rng = common::rng(seed);
        let a = common::random_hermitian(&mut rng, n);
        let mut abs: Vec<f64> = ev(&a).iter().map(|x| x.abs()).collect();
        abs.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let sv = singular_values(&a);
        for (s, e) in sv.iter().zip(&abs) {
            prop_assert!((s - e).abs() <= 1e-9);
        }
    }

    #[test]
    fn singular_values_frobenius(seed in any::<u64>(), r in 1usize..=7, c in 1usize..=7) {
        let mut rng = common::rng(seed);
        let a = common::random_complex(&mut rng, r, c);
        let sv = singular_values(&a);
        prop_assert_eq!(sv.len(), r.min(c));
        prop_assert!(sv.windows(2).all(|w| w[0] >= w[1]));
        let sq: f64 = sv.iter().map(|s| s * s).sum();
        prop_assert!((sq - a.frobenius_norm().powi(2)).abs() <= 1e-10 * (1.0 + sq));
    }

    #[test]
    fn kron_associative_and_mixed_product(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let a = common::random_complex(&mut rng, 2, 3);
        let b = common::random_complex(&mut rng, 3, 2);
        let c = common::random_complex(&mut rng, 3, 2);
        let d = common::random_complex(&mut rng, 2, 3);
        let left = kron(&kron(&a, &b), &c);
        let right = kron(&a, &kron(&b, &c));
        prop_assert!(left.max_abs_diff(&right) <= 1e-12);
        let ac = &a * &c;
        let bd = &b * &d;
        let mixed = &kron(&a, &b) * &kron(&c, &d);
        prop_assert!(mixed.max_abs_diff(&kron(&ac, &bd)) <= 1e-12);
    }

    #[test]
    fn minors_of_triangular(diag in prop::collection::vec(-3.0f64..3.0, 1..8)) {
        // upper-triangular: m_k is the product of the first k diagonal entries
        let n = diag.len();
        let a = CMatrix::from_fn(n, n, |i, j| if i == j { C64::new(diag[i], 0.0) } else if j > i { C64::new(0.5, 0.25) } else { C64::new(0.0, 0.0) });
        let m = leading_principal_minors(&a, n).unwrap();
        let mut acc = 1.0;
        for k in 0..n {
            acc *= diag[k];
            prop_assert!((m[k] - acc).abs() <= 1e-12 * (1.0 + acc.abs()));
        }
    }
}
