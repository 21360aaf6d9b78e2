use proptest::prelude::*;
use tensorinv::lr_oracle::{product_decompose, schur_decompose, schur_poly};
use tensorinv::{weyl, Signature};

fn signature(max_len: usize, max_entry: i64) -> impl Strategy<Value = Signature> {
    prop::collection::vec(0..=max_entry, 1..=max_len).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        Signature::normalize(&v).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn multiplier_calculus_matches_schur_products(
        factors in prop::collection::vec(signature(2, 4), 1..=3),
        k in 2usize..=5,
    ) {
        prop_assert_eq!(weyl::tensor_decompose(&factors, k).unwrap(), product_decompose(&factors, k).unwrap());
    }

    #[test]
    fn schur_round_trip(m in signature(3, 4), k in 3usize..=4) {
        let d = schur_decompose(&schur_poly(&m, k).unwrap()).unwrap();
        prop_assert_eq!(d, tensorinv::SignedSpectrum::single(m));
    }

    #[test]
    fn spectrum_is_stable_beyond_the_bound(factors in prop::collection::vec(signature(2, 3), 1..=3)) {
        let b = weyl::stability_bound(&factors);
        let s = weyl::stabilization_index(&factors).unwrap();
        prop_assert!(s <= b);
        let stable = weyl::tensor_decompose(&factors, b).unwrap();
        prop_assert_eq!(weyl::tensor_decompose(&factors, s).unwrap(), stable.clone());
        prop_assert_eq!(weyl::tensor_decompose(&factors, b + 1).unwrap(), stable);
    }

    #[test]
    fn product_is_commutative(a in signature(2, 3), b in signature(2, 3), k in 2usize..=4) {
        prop_assert_eq!(
            weyl::tensor_decompose(&[a.clone(), b.clone()], k).unwrap(),
            weyl::tensor_decompose(&[b, a], k).unwrap()
        );
    }
}
