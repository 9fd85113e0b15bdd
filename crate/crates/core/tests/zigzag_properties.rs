use conifold::zigzag::{direct_sum, dual, is_isomorphic, mu_corrected, mu_ic, mu_skyscraper, validate, ZigZag};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_tuple() -> impl Strategy<Value = ZigZag> {
    any::<u64>().prop_map(|seed| ZigZag::random(&mut ChaCha8Rng::seed_from_u64(seed), 2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn random_tuples_validate(z in random_tuple()) {
        prop_assert!(validate(z.data()).unwrap().is_valid());
        prop_assert!(validate(dual(&z).data()).unwrap().is_valid());
    }

    #[test]
    fn double_dual_is_isomorphic(z in random_tuple()) {
        prop_assert!(is_isomorphic(&dual(&dual(&z)), &z));
    }

    #[test]
    fn direct_sum_commutes(x in random_tuple(), y in random_tuple()) {
        prop_assert!(is_isomorphic(&direct_sum(&x, &y), &direct_sum(&y, &x)));
    }

    #[test]
    fn zero_is_a_unit(z in random_tuple()) {
        prop_assert_eq!(direct_sum(&z, &ZigZag::zero()).data().dims(), z.data().dims());
        prop_assert!(is_isomorphic(&direct_sum(&ZigZag::zero(), &z), &z));
    }

    #[test]
    fn isomorphism_respects_rank_data(x in random_tuple(), y in random_tuple()) {
        let same = x.dims() == y.dims() && x.ranks() == y.ranks();
        prop_assert_eq!(is_isomorphic(&x, &y), same);
    }
}

#[test]
fn table_rows_are_self_dual() {
    let corpus = [mu_ic(1, 1), mu_skyscraper(1).unwrap(), mu_skyscraper(3).unwrap(), mu_corrected(2).unwrap().0];
    for z in &corpus {
        assert!(is_isomorphic(&dual(z), z), "{z}");
    }
}

#[test]
fn isomorphism_is_an_equivalence_on_a_corpus() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let corpus: Vec<ZigZag> = (0..12).map(|_| ZigZag::random(&mut rng, 1)).collect();
    for a in &corpus {
        assert!(is_isomorphic(a, a));
        for b in &corpus {
            assert_eq!(is_isomorphic(a, b), is_isomorphic(b, a));
            for c in &corpus {
                if is_isomorphic(a, b) && is_isomorphic(b, c) {
                    assert!(is_isomorphic(a, c));
                }
            }
        }
    }
}
