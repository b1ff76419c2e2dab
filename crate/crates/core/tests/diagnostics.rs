mod common;

use common::*;
use proptest::prelude::*;
use tsirelson_core::diagnostics::*;
use tsirelson_core::rng::{gaussian_matrix, seeded};
use tsirelson_core::CMatrix;

fn random_map(seed: u64, dim: usize, shape: (usize, usize)) -> LinearMap {
    let mut rng = seeded(seed);
    let basis = (0..dim).map(|_| gaussian_matrix(&mut rng, shape.0, shape.1)).collect();
    let images = (0..dim).map(|_| gaussian_matrix(&mut rng, 2, 2)).collect();
    LinearMap::new(ConcreteSubspace::new(basis).unwrap(), images).unwrap()
}

#[test]
fn column_norm_examples() {
    let x = CMatrix::from_real(2, 2, &[1.0, 2.0, -0.5, 0.3]).unwrap();
    let op = schatten(&to_na(&x), f64::INFINITY);
    assert!((cb_norm_from_column(std::slice::from_ref(&x)).unwrap() - op).abs() < 1e-12);
    let images = [CMatrix::unit(2, 2, 0, 0), CMatrix::unit(2, 2, 1, 0)];
    assert!((cb_norm_from_column(&images).unwrap() - 2f64.sqrt()).abs() < 1e-12);
    assert!((cb_norm_from_row(&images).unwrap() - 1.0).abs() < 1e-12);
    let scaled: Vec<CMatrix> = images.iter().map(|m| m.scale(c(0.0, -3.0))).collect();
    assert!((cb_norm_from_column(&scaled).unwrap() - 3.0 * 2f64.sqrt()).abs() < 1e-12);
    assert!(cb_norm_from_column(&[]).is_err());
}

#[test]
fn subspace_needs_an_independent_basis() {
    let a = CMatrix::unit(2, 2, 0, 0);
    assert!(ConcreteSubspace::new(vec![a.clone(), a.scale_real(2.0)]).is_err());
    assert!(ConcreteSubspace::new(vec![a.clone(), CMatrix::unit(2, 3, 0, 0)]).is_err());
    assert!(ConcreteSubspace::new(vec![]).is_err());
    let e = ConcreteSubspace::new(vec![a, CMatrix::unit(2, 2, 1, 1)]).unwrap();
    assert_eq!((e.dim(), e.ambient()), (2, (2, 2)));
}

#[test]
fn zero_map_estimates_zero() {
    let e = ConcreteSubspace::new(vec![CMatrix::unit(2, 2, 0, 0), CMatrix::unit(2, 2, 0, 1)]).unwrap();
    let t = LinearMap::identity(e).scale(c(0.0, 0.0));
    let est = pi2h_lower_estimate(&t, Hilbertian::Column, 4, 1).unwrap();
    assert_eq!(est.value, 0.0);
    assert!(est.lower_bound_only);
}

#[test]
fn identity_on_a_line_gives_one() {
    for h in [Hilbertian::Column, Hilbertian::Row] {
        let e = ConcreteSubspace::new(vec![CMatrix::unit(2, 2, 0, 0)]).unwrap();
        let est = pi2h_lower_estimate(&LinearMap::identity(e), h, 8, 3).unwrap();
        assert!((est.value - 1.0).abs() < 1e-12, "{est:?}");
        assert!(est.value <= est.cap + 1e-12);
    }
}

#[test]
fn estimate_beats_the_inclusion_and_respects_the_cap() {
    for seed in 0..5 {
        let t = random_map(seed, 3, (2, 3));
        // Quotient of the inclusion S e_k = b_k, computed independently.
        let basis = t.domain.basis();
        let num = t.images.iter().map(|m| schatten(&to_na(m), f64::INFINITY).powi(2)).sum::<f64>().sqrt();
        for h in [Hilbertian::Column, Hilbertian::Row] {
            let cb = match h {
                Hilbertian::Column => schatten(&vstack(basis), f64::INFINITY),
                Hilbertian::Row => schatten(&hstack(basis), f64::INFINITY),
            };
            let est = pi2h_lower_estimate(&t, h, 6, seed).unwrap();
            assert!(est.value >= num / cb - 1e-12);
            assert!(est.value <= est.cap * (1.0 + 1e-12), "{} > {}", est.value, est.cap);
            assert_eq!(est.witness.len(), 3);
        }
    }
}

#[test]
fn more_trials_never_give_less() {
    let t = random_map(11, 2, (2, 2));
    let mut prev = 0.0;
    for trials in 1..=6 {
        let v = pi2h_lower_estimate(&t, Hilbertian::Column, trials, 5).unwrap().value;
        assert!(v >= prev);
        prev = v;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn estimate_is_homogeneous(seed in 0u64..1000, re in -3.0f64..3.0, im in -3.0f64..3.0) {
        prop_assume!(re.abs() + im.abs() > 1e-3);
        let t = random_map(seed, 2, (2, 2));
        let s = c(re, im);
        let a = pi2h_lower_estimate(&t, Hilbertian::Row, 3, seed).unwrap().value;
        let b = pi2h_lower_estimate(&t.scale(s), Hilbertian::Row, 3, seed).unwrap().value;
        prop_assert!((b - s.norm() * a).abs() <= 1e-9 * (1.0 + b));
    }
}
