//! End to end: the same vanishing cycle seen in the zig-zag exact sequence
//! and in the limiting weight data.

use conifold::degeneration::{
    build_corrected, check_les, limiting_graded_dims, random_exact_complex, vanishing_rank, DegenerationSpec,
};
use conifold::monodromy::{
    jordan_weight_oracle, pl_transvection, random_nilpotent, to_rational, total_monodromy, weight_filtration, Lattice,
    VanishingConfig,
};
use conifold::qlinalg::log_unipotent;
use conifold::{QMatrix, Z};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SINGLE_NODE: &str = r#"{
    "fiber_dim": 3,
    "strata": [{"label": "p", "dim": 0, "milnor_rank": 1}],
    "lattice": {"rank": 2, "gram": [[0, 1], [-1, 0]], "symmetry": "skew"},
    "cycles": [[1, 0]]
}"#;

#[test]
fn single_node_defect_matches_rank_of_n() {
    let spec: DegenerationSpec = serde_json::from_str(SINGLE_NODE).unwrap();
    let seq = build_corrected(&spec).unwrap();
    let limit = limiting_graded_dims(&spec, None).unwrap();
    assert!(seq.verdict && limit.passes());
    assert_eq!(seq.pointwise_defect, vanishing_rank(&spec).unwrap());
    assert_eq!(seq.pointwise_defect, limit.rank_n);
}

#[test]
fn disjoint_nodes_add_up() {
    let pairs = 3;
    let cycles: Vec<Vec<Z>> =
        (0..pairs).map(|i| (0..2 * pairs).map(|j| Z::from(i64::from(j == 2 * i))).collect()).collect();
    let cfg = VanishingConfig::new(Lattice::hyperbolic_skew(pairs), cycles).unwrap();
    let spec = DegenerationSpec::nodes(3, pairs).with_lattice(cfg.clone());
    let limit = limiting_graded_dims(&spec, None).unwrap();
    assert_eq!(limit.rank_n, pairs);
    assert_eq!(limit.graded_dims, [(2, 3), (4, 3)].into_iter().collect());
    assert_eq!(build_corrected(&spec).unwrap().pointwise_defect, pairs);
    let n = log_unipotent(&to_rational(&total_monodromy(&cfg).unwrap())).unwrap();
    assert!(n.rank() <= cfg.cycle_count());
}

#[test]
fn transvections_have_rank_at_most_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let pairs = rng.gen_range(1..=3);
        let cycle: Vec<Z> = (0..2 * pairs).map(|_| Z::from(rng.gen_range(-3i64..=3))).collect();
        let cfg = VanishingConfig::new(Lattice::hyperbolic_skew(pairs), vec![cycle]).unwrap();
        let t = to_rational(&pl_transvection(&cfg, 1).unwrap());
        let x = &t - &QMatrix::identity(2 * pairs);
        assert!(x.rank() <= 1);
        assert!((&x * &x).is_zero());
    }
}

#[test]
fn weight_filtration_matches_oracle_on_random_input() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..40 {
        let size = rng.gen_range(1..=6);
        let center = rng.gen_range(-2..=4);
        let n = random_nilpotent(&mut rng, size);
        assert_eq!(weight_filtration(&n, center).unwrap(), jordan_weight_oracle(&n, center).unwrap());
    }
}

#[test]
fn generated_exact_complexes_pass() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..20 {
        let c = random_exact_complex(&mut rng, 3, 2);
        assert!(check_les(&c.witness()).unwrap().exact);
    }
}
