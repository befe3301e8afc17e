//! Property tests for the structural invariants.

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use eigres_core::blowup2::{blow_down, pauli_coords, radial_lift, BallCoords};
use eigres_core::hermitian::{make_hermitian, trace_split};
use eigres_core::isotropy::{self, IsotropyIndex};

fn hermitian_strategy(n: usize) -> impl Strategy<Value = eigres_core::HermitianMatrix> {
    let entries = prop::collection::vec(-5.0..5.0f64, n * n * 2);
    entries.prop_map(move |vals| {
        let raw = DMatrix::from_fn(n, n, |i, j| {
            let idx = 2 * (i * n + j);
            Complex64::new(vals[idx], vals[idx + 1])
        });
        let sym = (&raw + raw.adjoint()) * Complex64::new(0.5, 0.0);
        make_hermitian(&sym, 1e-9).unwrap()
    })
}

fn index_strategy(n: usize) -> impl Strategy<Value = IsotropyIndex> {
    prop::collection::btree_set(1..n, 0..n.saturating_sub(1)).prop_map(move |interior| {
        let mut v = vec![0usize];
        v.extend(interior);
        v.push(n);
        IsotropyIndex::new(v).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trace_split_round_trips(x in hermitian_strategy(4)) {
        let split = trace_split(&x);
        prop_assert!(split.traceless.trace().abs() <= 1e-10 * 4.0);
        let back = split.reconstruct();
        let err = (back.as_matrix() - x.as_matrix()).norm();
        prop_assert!(err <= 1e-12 * (1.0 + x.frobenius_norm()));
    }

    #[test]
    fn pauli_round_trips(a in -3.0..3.0f64, c in -3.0..3.0f64, d in -3.0..3.0f64, tau in -3.0..3.0f64) {
        let b = BallCoords::new(a, c, d, tau);
        let back = pauli_coords(&b.to_matrix()).unwrap();
        prop_assert!((back.a - a).abs() <= 1e-14);
        prop_assert!((back.c - c).abs() <= 1e-14);
        prop_assert!((back.d - d).abs() <= 1e-14);
        prop_assert!((back.tau - tau).abs() <= 1e-14);
    }

    #[test]
    fn radial_lift_blow_down_round_trips(a in -2.0..2.0f64, c in -2.0..2.0f64, d in -2.0..2.0f64) {
        prop_assume!(a * a + c * c + d * d > 1e-12);
        let b = BallCoords::new(a, c, d, 0.0);
        let lifted = radial_lift(&b).unwrap();
        let back = blow_down(&lifted);
        prop_assert!((back.a - a).abs() <= 1e-12);
        prop_assert!((back.c - c).abs() <= 1e-12);
        prop_assert!((back.d - d).abs() <= 1e-12);
    }

    #[test]
    fn leq_is_a_partial_order(i in index_strategy(6), j in index_strategy(6), k in index_strategy(6)) {
        // reflexive
        prop_assert!(isotropy::leq(&i, &i).unwrap());
        // antisymmetric
        if isotropy::leq(&i, &j).unwrap() && isotropy::leq(&j, &i).unwrap() {
            prop_assert_eq!(&i, &j);
        }
        // transitive
        if isotropy::leq(&i, &j).unwrap() && isotropy::leq(&j, &k).unwrap() {
            prop_assert!(isotropy::leq(&i, &k).unwrap());
        }
    }

    #[test]
    fn split_merge_identity(i in index_strategy(8)) {
        let interior: Vec<usize> = i.indices().iter().copied()
            .filter(|&v| v != 0 && v != i.n()).collect();
        for k in interior {
            let (l, r) = isotropy::split_index(&i, k).unwrap();
            let merged = isotropy::merge_index(&l, &r).unwrap();
            prop_assert_eq!(&merged, &i);
        }
    }
}
