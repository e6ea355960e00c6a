mod common;

use common::{to_set, Masks};
use fo2cis::benchgen::random_cis;
use fo2cis::graph_system::*;
use fo2cis::VertexSet;
use proptest::prelude::*;
use rand::seq::SliceRandom;

fn system() -> impl Strategy<Value = GraphSystem> {
    (1usize..=12, 1usize..=3, 0.0f64..0.6, 0.05f64..0.7, any::<u64>())
        .prop_map(|(n, m, pc, pl, seed)| random_cis(n, m, pc, pl, seed).unwrap())
}

/// Removes bad vertices one at a time in a shuffled order.
fn naive_prune(g: &GraphSystem, y: &VertexSet, seed: u64) -> VertexSet {
    let mut s = y.clone();
    let mut rng = common::rng(seed);
    loop {
        let mut members = s.to_vec();
        members.shuffle(&mut rng);
        match members.into_iter().find(|&u| !g.is_good_in(u, &s)) {
            Some(u) => s.remove(u),
            None => return s,
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn solvers_agree_with_subset_oracle(g in system(), seed in any::<u64>()) {
        let oracle = Masks::new(&g).has_gis();
        let reports = [solve_a(&g), solve_b(&g, seed), brute_force(&g).unwrap()];
        for r in &reports {
            prop_assert_eq!(r.is_sat(), oracle, "{}", r.algorithm.name());
            if let Some(c) = &r.certificate {
                prop_assert!(verify_gis(&g, c.vertices()).unwrap());
                prop_assert!(Masks::new(&g).set_gis(c.vertices()));
            }
        }
    }

    #[test]
    fn pruning_is_order_independent(g in system(), seed in any::<u64>()) {
        let n = g.n_vertices();
        let mut rng = common::rng(seed);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let mut y = VertexSet::empty(n);
        for v in order {
            if !g.conflicts_of(v).intersects(&y) {
                y.insert(v);
            }
        }
        let fast = prune_to_max_gis(&g, &y).unwrap();
        prop_assert_eq!(&fast, &naive_prune(&g, &y, seed));
        prop_assert_eq!(&fast, &naive_prune(&g, &y, seed ^ 0x9e37));
        prop_assert!(fast.is_subset(&y));
    }

    #[test]
    fn gis_closed_under_independent_union(g in system()) {
        let masks = Masks::new(&g);
        let all = masks.all_gis();
        for (i, &a) in all.iter().enumerate().take(20) {
            for &b in all.iter().skip(i + 1).take(20) {
                if g.is_independent(&to_set(masks.n, a | b)) {
                    prop_assert!(masks.is_gis(a | b));
                }
            }
        }
    }

    #[test]
    fn solve_b_verdict_ignores_seed(g in system()) {
        let first = solve_b(&g, 0).verdict;
        for seed in 1..10 {
            prop_assert_eq!(solve_b(&g, seed).verdict, first);
        }
    }

    #[test]
    fn cis_format_round_trips(g in system()) {
        prop_assert_eq!(parse_cis(&write_cis(&g, &["t".into()])).unwrap(), g);
    }
}

#[test]
fn fragment_solvers_match_oracle() {
    let mut rng = common::rng(11);
    for i in 0..300u64 {
        let n = 1 + (i as usize % 10);
        let cf = random_cis(n, 1 + (i as usize % 3), 0.0, 0.25, i).unwrap();
        let oracle = Masks::new(&cf).has_gis();
        assert_eq!(solve_conflict_free(&cf).unwrap().is_sat(), oracle);
        if cf.m() == 1 {
            assert_eq!(solve_cycle_m1(&cf).unwrap().is_sat(), oracle);
        }
        let uo = common::random_uniquely_outgoing(n, 1 + (i as usize % 3), 0.3, &mut rng);
        let r = solve_uniquely_outgoing(&uo).unwrap();
        assert_eq!(r.is_sat(), Masks::new(&uo).has_gis());
        if let Some(c) = r.certificate {
            assert!(verify_gis(&uo, c.vertices()).unwrap());
        }
    }
}

#[test]
fn fragment_solvers_reject_wrong_shapes() {
    let g = random_cis(4, 2, 1.0, 0.5, 0).unwrap();
    assert!(solve_conflict_free(&g).is_err());
    assert!(solve_cycle_m1(&g).is_err());
}

#[test]
fn explain_gis_matches_verify() {
    for seed in 0..200 {
        let g = random_cis(6, 2, 0.3, 0.4, seed).unwrap();
        let masks = Masks::new(&g);
        for s in 0u32..64 {
            let set = to_set(6, s);
            assert_eq!(explain_gis(&g, &set).unwrap().is_none(), masks.is_gis(s));
        }
    }
}

#[test]
fn budget_stops_algorithm_a() {
    let g = fo2cis::benchgen::gen_exp_b_graph(3).unwrap();
    let budget = fo2cis::Budget::unlimited().with_max_branches(10);
    assert_eq!(solve_a_with_budget(&g, budget).unwrap_err(), fo2cis::Error::BudgetExceeded);
}
