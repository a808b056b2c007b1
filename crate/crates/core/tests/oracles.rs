mod common;

use std::collections::BTreeSet;

use common::random_pool;
use pskyline::dominance::{dominates_via_top, skyline_positions, winnow_positions};
use pskyline::extension::{applications, apply_rule, extension_chain_bound, predicted_edges};
use pskyline::harness::random_relation;
use pskyline::*;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn superior_sample(rng: &mut ChaCha8Rng, pool: &Dataset, max: usize) -> Vec<String> {
    let sky = skyline_positions(pool.tuples());
    let k = rng.random_range(1..=sky.len().min(max));
    index::sample(rng, sky.len(), k)
        .into_iter()
        .map(|i| pool.tuples()[sky[i]].id().to_string())
        .collect()
}

#[test]
fn pgraph_counts() {
    let counts: Vec<usize> = (1..=4).map(|n| enumerate_pgraphs(n).unwrap().len()).collect();
    assert_eq!(counts, [1, 3, 19, 195]);
}

#[test]
fn rule_postconditions() {
    for n in 2..=4 {
        for g in enumerate_pgraphs(n).unwrap() {
            let rel = PSkylineRelation::from_graph(g.clone()).unwrap();
            for app in applications(rel.tree()) {
                let next = apply_rule(rel.tree(), &app).unwrap();
                let after = PGraph::from_tree(&next, n);
                let mut predicted = predicted_edges(rel.tree(), &app).unwrap();
                predicted.sort();
                assert!(g.is_proper_subgraph_of(&after).unwrap(), "{app}");
                assert_eq!(g.added_edges(&after), predicted, "{app}");
                assert_eq!(next.vars(), AttrSet::full(n));
            }
        }
    }
}

#[test]
fn extension_chains_reach_total_orders() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 1..=6 {
        for _ in 0..20 {
            let mut tree = PSkylineRelation::skyline(n).tree().clone();
            let mut steps = 0;
            loop {
                let exts = minimal_extensions(&tree, n);
                if exts.is_empty() {
                    break;
                }
                tree = exts[rng.random_range(0..exts.len())].tree.clone();
                steps += 1;
            }
            assert!(steps <= extension_chain_bound(n));
            assert_eq!(PGraph::from_tree(&tree, n).edge_count(), n * (n - 1) / 2);
        }
    }
}

#[test]
fn random_relations_cover_three_attributes() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let seen: BTreeSet<_> = (0..1000)
        .map(|_| random_relation(3, &mut rng).graph().edges())
        .collect();
    assert_eq!(seen.len(), 19);
}

#[test]
fn fast_dominance_matches_top_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..2000 {
        let n = rng.random_range(1..=7);
        let rel = random_relation(n, &mut rng);
        let d = random_pool(&mut rng, n, 2, 3);
        let (a, b) = (&d.tuples()[0], &d.tuples()[1]);
        assert_eq!(rel.dominates(a, b), dominates_via_top(rel.graph(), a, b));
    }
}

#[test]
fn negative_constraints_capture_favoring() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let all = enumerate_pgraphs(3).unwrap();
    for _ in 0..100 {
        let rows = rng.random_range(2..=10);
        let pool = random_pool(&mut rng, 3, rows, 3);
        let g = superior_sample(&mut rng, &pool, 3);
        let positions = pool.positions(&g).unwrap();
        let neg = build_negative(&g, &pool).unwrap();
        for h in &all {
            let w = winnow_positions(h, pool.tuples());
            let favoring = positions.iter().all(|p| w.contains(p));
            assert_eq!(satisfies(h, &neg), favoring, "{:?} {g:?}", h.edges());
        }
    }
}

#[test]
fn positive_constraints_capture_dominance() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let all = enumerate_pgraphs(3).unwrap();
    for _ in 0..100 {
        let pool = random_pool(&mut rng, 3, 6, 3);
        let superior = vec![pool.tuples()[0].id(), pool.tuples()[1].id()];
        let inferior = vec![pool.tuples()[2].id(), pool.tuples()[3].id()];
        let pos = build_positive(&inferior, &superior, &pool).unwrap();
        for h in &all {
            let want = pool.tuples()[2..4]
                .iter()
                .all(|w| pool.tuples()[..2].iter().any(|g| dominates(h, g, w)));
            assert_eq!(satisfies(h, &pos), want);
            let simple: Vec<_> = pos.iter().map(|p| p.simplified()).collect();
            assert_eq!(satisfies(h, &simple), want);
        }
    }
}

#[test]
fn minimization_preserves_satisfaction_above_base() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let all = enumerate_pgraphs(4).unwrap();
    for _ in 0..60 {
        let rows = rng.random_range(2..=10);
        let pool = random_pool(&mut rng, 4, rows, 3);
        let g = superior_sample(&mut rng, &pool, 2);
        let neg = build_negative(&g, &pool).unwrap();
        let satisfying: Vec<&PGraph> = all.iter().filter(|h| satisfies(h, &neg)).collect();
        let base = satisfying[rng.random_range(0..satisfying.len())];
        let min = neg.minimize_wrt(base).unwrap();
        for h in all.iter().filter(|h| base.is_subgraph_of(h).unwrap()) {
            assert_eq!(satisfies(h, &min), satisfies(h, &neg));
        }
        let outside = all.iter().find(|h| !satisfies(h, &neg));
        if let Some(bad) = outside {
            assert!(matches!(neg.minimize_wrt(bad), Err(Error::Precondition(_))));
        }
    }
}

#[test]
fn elicitation_stages_are_maximal_on_admitted_attributes() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let all = enumerate_pgraphs(4).unwrap();
    for _ in 0..60 {
        let rows = rng.random_range(2..=12);
        let pool = random_pool(&mut rng, 4, rows, 3);
        let g = superior_sample(&mut rng, &pool, 3);
        for flip in [false, true] {
            let config = ElicitConfig {
                rule1_first: !flip,
                below_leaf_first: !flip,
                ..ElicitConfig::default()
            };
            let e = elicit(&g, &pool, &config).unwrap();
            let neg = &e.constraints;
            for window in e.stages.windows(2) {
                assert!(window[0].1.is_subgraph_of(&window[1].1).unwrap());
            }
            for (m, stage) in &e.stages {
                assert!(satisfies(stage, neg));
                assert!(stage.edges().iter().all(|&(a, b)| m.contains(a) && m.contains(b)));
                let inside = |h: &PGraph| h.edges().iter().all(|&(a, b)| m.contains(a) && m.contains(b));
                let larger = all
                    .iter()
                    .any(|h| inside(h) && stage.is_proper_subgraph_of(h).unwrap() && satisfies(h, neg));
                assert!(!larger, "stage over {m:?} is not maximal");
            }
        }
    }
}

#[test]
fn elicitation_agrees_with_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..40 {
        let pool = random_pool(&mut rng, 3, 8, 3);
        let g = superior_sample(&mut rng, &pool, 2);
        let e = elicit(&g, &pool, &ElicitConfig::default()).unwrap();
        let best = brute_force_opt_fdf::<_, &str>(&g, &[], &pool, 5).unwrap().unwrap();
        assert!(e.relation.graph().edge_count() <= best.graph().edge_count());
        assert!(brute_force_df::<_, &str>(&g, &[], &pool, 5).unwrap().is_some());
    }
}

#[test]
fn general_envelope_holds_on_valid_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let n = 5;
    let mut instances = 0;
    for _ in 0..150 {
        let g = random_relation(n, &mut rng).graph().clone();
        for code in 0..5usize.pow(n as u32) {
            let mut sets = [AttrSet::EMPTY; 4];
            let mut c = code;
            for node in 0..n {
                if c % 5 < 4 {
                    sets[c % 5].insert(node);
                }
                c /= 5;
            }
            if let Ok(holds) = general_envelope_holds(&g, sets[0], sets[1], sets[2], sets[3]) {
                assert!(holds, "{:?} {sets:?}", g.edges());
                instances += 1;
            }
        }
    }
    assert!(instances > 0);
}
