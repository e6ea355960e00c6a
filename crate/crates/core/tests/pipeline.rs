mod common;

use common::{random_eq, random_noeq, Masks};
use fo2cis::benchgen::{gen_exp_a, gen_exp_b, gen_exp_b_graph, gen_exp_c, gen_exp_d};
use fo2cis::eq_elim::*;
use fo2cis::fo2::*;
use fo2cis::model::*;
use fo2cis::solver::{solve_formula, SolverOptions};

#[test]
fn noeq_pipeline_agrees_with_bounded_search() {
    let mut rng = common::rng(21);
    let (mut sat, mut unsat) = (0, 0);
    for _ in 0..300 {
        let phi = random_noeq(&mut rng);
        let out = solve_formula(&Snf::NoEq(phi.clone()), &SolverOptions::default(), true).unwrap();
        let search = bounded_model_search(&Snf::NoEq(phi.clone()), 3).unwrap();
        if out.is_sat() {
            sat += 1;
            let mdl = out.model.as_ref().unwrap();
            let gis = out.report.certificate.as_ref().unwrap().len();
            assert_eq!(mdl.size(), 3 * phi.m() * gis);
            assert!(check_model(&phi, mdl).unwrap().holds());
        } else {
            unsat += 1;
            assert!(search.model().is_none(), "pipeline UNSAT but a model exists");
        }
        if let Some(mdl) = search.model() {
            assert!(out.is_sat());
            assert!(check_model(&phi, mdl).unwrap().holds());
        }
    }
    assert!(sat > 30 && unsat > 30, "{sat} sat, {unsat} unsat");
}

#[test]
fn compiled_conflicts_are_symmetric_and_loop_free() {
    let mut rng = common::rng(4);
    for _ in 0..200 {
        let phi = random_noeq(&mut rng);
        let cs = build_graph_system(&phi).unwrap();
        let g = cs.system();
        for u in 0..g.n_vertices() {
            assert!(!g.conflicting(u, u));
            for v in 0..g.n_vertices() {
                assert_eq!(g.conflicting(u, v), g.conflicting(v, u));
                assert_eq!(g.conflicting(u, v), pair_compatible(&phi, cs.types()[u], cs.types()[v]).is_none());
            }
        }
    }
}

#[test]
fn exp_d_round_trips() {
    for n in 1..=3 {
        for seed in 0..8 {
            let d = gen_exp_d(n, seed).unwrap();
            let cs = build_graph_system(&d.formula).unwrap();
            let g = cs.system();
            assert_eq!(g.n_vertices(), d.system.n_vertices());
            for u in 0..g.n_vertices() {
                for v in 0..g.n_vertices() {
                    assert_eq!(g.conflicting(u, v), d.system.conflicting(u, v), "n={n} seed={seed}");
                    assert_eq!(g.has_edge(1, u, v), d.system.has_edge(1, u, v), "n={n} seed={seed}");
                }
            }
            let out = solve_formula(&Snf::NoEq(d.formula), &SolverOptions::default(), true).unwrap();
            assert_eq!(out.is_sat(), Masks::new(&d.system).has_gis());
        }
    }
}

#[test]
fn exp_d_text_is_deterministic() {
    let a = write_fo2(&Snf::NoEq(gen_exp_d(3, 0).unwrap().formula), &[]);
    let b = write_fo2(&Snf::NoEq(gen_exp_d(3, 0).unwrap().formula), &[]);
    assert_eq!(a, b);
    assert_eq!(parse_fo2(&a).unwrap(), Snf::NoEq(gen_exp_d(3, 0).unwrap().formula));
}

#[test]
fn exp_a_and_b_small() {
    for n in 2..=7 {
        let out = solve_formula(&Snf::NoEq(gen_exp_a(n).unwrap()), &SolverOptions::default(), true).unwrap();
        assert_eq!(out.is_sat(), n % 2 == 0, "exp_a n={n}");
        assert!(out.model_check.is_none_or(|c| c.holds()));
    }
    let g = gen_exp_b_graph(1).unwrap();
    assert_eq!(Masks::new(&g).all_gis().len(), 1);
    let out = solve_formula(&Snf::NoEq(gen_exp_b(2).unwrap()), &SolverOptions::default(), true).unwrap();
    assert_eq!(out.report.certificate.unwrap().len(), 16 / 3);
}

#[test]
fn equality_elimination_shape() {
    let mut rng = common::rng(9);
    for _ in 0..100 {
        let psi = random_eq(&mut rng);
        let star = eliminate_equality(&psi).unwrap();
        let counts = count_star_predicates(&psi);
        assert_eq!(star.vocab().unary().len(), counts.unary);
        assert_eq!(star.vocab().binary().len(), counts.binary);
        assert_eq!(star.m(), counts.exists_conjuncts);
        assert_eq!(star.m(), psi.m() + 1);
        let classic = eliminate_equality_with(&psi, Construction::Classic).unwrap();
        assert_eq!(classic.m(), psi.m() + 1);
        assert_eq!(classic.vocab(), star.vocab());
        assert!(star.table().eq_atom().is_none());
        let text = write_fo2(&Snf::NoEq(star.clone()), &[]);
        assert_eq!(parse_fo2(&text).unwrap(), Snf::NoEq(star));
    }
}

#[test]
fn equality_pipeline_is_sound_on_tiny_sentences() {
    let mut rng = common::rng(17);
    let (mut found, mut refuted) = (0, 0);
    for _ in 0..400 {
        let psi = random_eq(&mut rng);
        let snf = Snf::WithEq(psi.clone());
        let out = solve_formula(&snf, &SolverOptions::default(), true).unwrap();
        if out.is_sat() {
            assert!(out.model_check.unwrap().holds());
        }
        match bounded_model_search(&snf, 3).unwrap() {
            SearchOutcome::Found(mdl) => {
                found += 1;
                assert!(check_model_eq(&psi, &mdl).unwrap().holds());
                assert!(out.is_sat(), "Ψ has a model but Ψ* was refuted:\n{}\n{}", write_fo2(&snf, &[]), write_model(&mdl, psi.vocab()).unwrap());
            }
            _ if !out.is_sat() => refuted += 1,
            _ => {}
        }
    }
    assert!(found > 50 && refuted > 10, "{found} found, {refuted} refuted");
}

const TOURNAMENT: &str = "fo2 eq\nunary P\nbinary R\nforall_neq: R(x,y) <-> ~R(y,x)\nexists_neq: R\n";

#[test]
fn classic_construction_loses_tournaments() {
    let snf = parse_fo2(TOURNAMENT).unwrap();
    let Snf::WithEq(psi) = &snf else { unreachable!() };
    assert!(bounded_model_search(&snf, 3).unwrap().model().is_some());
    let classic = eliminate_equality_with(psi, Construction::Classic).unwrap();
    let out = solve_formula(&Snf::NoEq(classic), &SolverOptions::default(), false).unwrap();
    assert!(!out.is_sat());
    let out = solve_formula(&snf, &SolverOptions::default(), true).unwrap();
    assert!(out.is_sat());
    assert!(out.model_check.unwrap().holds());
}

#[test]
fn equality_pipeline_refutes_what_bounded_search_refutes() {
    // For one unary predicate and one witness requirement a satisfiable
    // sentence has a model of at most 3·1·2 elements.
    let mut rng = common::rng(23);
    let mut checked = 0;
    for _ in 0..300 {
        let psi = random_eq(&mut rng);
        let snf = Snf::WithEq(psi.clone());
        let limits = SearchLimits { max_size: 6, work_cap: 2_000_000 };
        if let SearchOutcome::Exhausted = bounded_model_search_with(&snf, limits).unwrap() {
            checked += 1;
            let out = solve_formula(&snf, &SolverOptions::default(), false).unwrap();
            assert!(!out.is_sat(), "pipeline SAT, no model up to 6:\n{}", write_fo2(&snf, &[]));
        }
    }
    assert!(checked > 20, "{checked}");
}

#[test]
fn exp_c_small_is_sat_with_minimal_model() {
    for n in 1..=2 {
        let out = solve_formula(&Snf::WithEq(gen_exp_c(n).unwrap()), &SolverOptions::default(), true).unwrap();
        assert!(out.is_sat());
        assert!(out.model_check.unwrap().holds());
    }
    let snf = Snf::WithEq(gen_exp_c(1).unwrap());
    assert!(matches!(bounded_model_search(&snf, 1).unwrap(), SearchOutcome::Exhausted));
    assert_eq!(bounded_model_search(&snf, 2).unwrap().model().unwrap().size(), 2);
}

#[test]
fn model_text_round_trip_and_mutation() {
    let phi = gen_exp_a(4).unwrap();
    let out = solve_formula(&Snf::NoEq(phi.clone()), &SolverOptions::default(), true).unwrap();
    let mdl = out.model.unwrap();
    let text = write_model(&mdl, phi.vocab()).unwrap();
    assert_eq!(parse_model(&text, phi.vocab()).unwrap(), mdl);
    let mut refuted = 0;
    for a in 0..mdl.size().min(12) {
        for b in 0..mdl.size().min(12) {
            let mut bad = mdl.clone();
            bad.set_binary(0, a, b, !mdl.binary(0, a, b));
            if let ModelCheck::Violated(v) = check_model(&phi, &bad).unwrap() {
                refuted += 1;
                assert!(v.a < mdl.size());
            }
        }
    }
    assert!(refuted > 0);
}
