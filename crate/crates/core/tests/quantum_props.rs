use kummer_core::{meanfield, quantum, ModelSpec};
use proptest::prelude::*;

fn pair() -> impl Strategy<Value = (u32, u32)> {
    prop::sample::select(vec![(1, 1), (2, 1), (1, 2), (2, 2), (3, 1), (3, 2), (3, 3), (4, 1), (4, 3)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn identities_hold((m, n) in pair(), dim in 2usize..120, eps in -2.0f64..2.0, v in -2.0f64..2.0) {
        let spec = ModelSpec::with_dim(m, n, dim, eps, v).unwrap();
        let r = quantum::identity_residuals(&spec);
        prop_assert!(r.max_residual() < 1e-9, "{:?}", r);
    }

    #[test]
    fn spectrum_inside_classical_band((m, n) in pair(), dim in 2usize..150, eps in -2.0f64..2.0, v in 0.1f64..2.0) {
        let spec = ModelSpec::with_dim(m, n, dim, eps, v).unwrap();
        let res = quantum::eigen_spectrum(&spec).unwrap();
        let (lo, hi) = meanfield::energy_range(&spec);
        let slack = 3.0 * spec.eta();
        for e in &res.scaled_eigenvalues {
            prop_assert!(*e >= lo - slack && *e <= hi + slack, "{} outside [{}, {}]", e, lo, hi);
        }
        prop_assert!(quantum::spot_check_residual(&res, 4) < 1e-10);
    }

    #[test]
    fn swapping_modes_flips_eps((m, n) in pair(), dim in 2usize..80, eps in -2.0f64..2.0, v in -2.0f64..2.0) {
        let spec = ModelSpec::with_dim(m, n, dim, eps, v).unwrap();
        let a = quantum::eigen_spectrum(&spec).unwrap().scaled_eigenvalues;
        let b = quantum::eigen_spectrum(&spec.swapped().with_eps(-eps)).unwrap().scaled_eigenvalues;
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn sign_of_v_is_irrelevant((m, n) in pair(), dim in 2usize..80, eps in -2.0f64..2.0, v in 0.1f64..2.0) {
        let a = quantum::eigen_spectrum(&ModelSpec::with_dim(m, n, dim, eps, v).unwrap()).unwrap();
        let b = quantum::eigen_spectrum(&ModelSpec::with_dim(m, n, dim, eps, -v).unwrap()).unwrap();
        for (x, y) in a.scaled_eigenvalues.iter().zip(&b.scaled_eigenvalues) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }
}

#[test]
fn histogram_integrates_to_one() {
    let spec = ModelSpec::new(2, 1, 400, 0.5, 1.0).unwrap();
    let res = quantum::eigen_spectrum(&spec).unwrap();
    let h = quantum::dos_histogram(&res, 37).unwrap();
    assert!((h.integral() - 1.0).abs() < 1e-12);
    assert_eq!(h.centers().len(), 37);
}

#[test]
fn sweep_is_deterministic_across_pool_sizes() {
    let spec = ModelSpec::new(2, 1, 40, 0.0, 1.0).unwrap();
    let grid: Vec<f64> = (0..9).map(|k| -2.0 + 0.5 * k as f64).collect();
    let a = quantum::sweep_epsilon(&spec, &grid, Some(1)).unwrap();
    let b = quantum::sweep_epsilon(&spec, &grid, Some(4)).unwrap();
    assert_eq!(a, b);
    assert!(quantum::sweep_epsilon(&spec, &[], None).is_err());
}
