use dflow_core::homalg::lattice::invariant_factors;
use dflow_core::homalg::{same_homology, smith_normal_form, IntegerMatrix};
use dflow_core::random::{random_acyclic_field, random_simplicial, rng};
use dflow_core::spectral::spectral_sequence;
use dflow_core::{Coefficients, FlowCategory};
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..=6, c), r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_matches_sparse_invariant_factors(rows in matrix()) {
        let m = IntegerMatrix::from_rows(&rows);
        let snf = smith_normal_form(&m);
        prop_assert!(snf.verify(&m));
        let dense = snf.invariant_factors();
        let sparse = invariant_factors(&m.to_sparse());
        prop_assert_eq!(&dense, &sparse);
        for w in dense.windows(2) {
            prop_assert!((&w[1] % &w[0]) == BigInt::from(0));
        }
        if m.rows() == m.cols() {
            let prod: BigInt = if dense.len() == m.rows() { dense.iter().product() } else { BigInt::from(0) };
            prop_assert_eq!(prod, m.determinant().abs());
        }
    }

    #[test]
    fn spectral_homology_matches_simplicial_homology(seed in 0u64..10_000, keep in 0.0f64..=1.0) {
        let mut r = rng(seed);
        let (sc, cx) = random_simplicial(&mut r, 16);
        let v = random_acyclic_field(&mut r, &cx, keep);
        let s = spectral_sequence(&FlowCategory::new(cx, v), Coefficients::Integers).unwrap();
        let oracle = sc.chain_complex().homology(Coefficients::Integers);
        prop_assert!(same_homology(&s.homology, &oracle));
    }
}
