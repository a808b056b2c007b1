mod common;

use common::{cars, numeric};
use pskyline::constraints::NegSystem;
use pskyline::elicitation::winnow_ids;
use pskyline::model::Comparison;
use pskyline::pgraph::contains;
use pskyline::*;

fn set(s: &Schema, names: &[&str]) -> AttrSet {
    s.attr_set(names).unwrap()
}

#[test]
fn cars_skyline_and_winnow() {
    let d = cars();
    assert_eq!(d.ids(), ["t1", "t2", "t3", "t4", "t5"]);
    assert_eq!(skyline(&d).ids(), ["t1", "t2", "t3", "t4"]);
    let sky = PSkylineRelation::skyline(3);
    assert_eq!(winnow(&sky, &d).unwrap().ids(), ["t1", "t2", "t3", "t4"]);
    let rel = PSkylineRelation::parse("year & (price * make)", d.schema()).unwrap();
    assert_eq!(winnow(&rel, &d).unwrap().ids(), ["t2", "t4"]);
    let t = d.tuples();
    assert!(!sky.dominates(&t[2], &t[0]) && !sky.dominates(&t[0], &t[2]));
}

#[test]
fn cars_value_comparisons() {
    let d = cars();
    let s = d.schema();
    let cmp = |i: usize, a: &Value, b: &Value| compare_values(s.attribute(i), a, b).unwrap();
    assert_eq!(cmp(0, &Value::Cat("bmw".into()), &Value::Cat("ford".into())), Comparison::Better);
    assert_eq!(cmp(1, &Value::Num(30000), &Value::Num(45000)), Comparison::Better);
    assert_eq!(cmp(2, &Value::Num(2007), &Value::Num(2007)), Comparison::Equal);
}

#[test]
fn containment_instance() {
    let d = numeric(3, &[&[2, 1, 0], &[1, 2, 0], &[1, 0, 2], &[1, 0, 0]]);
    let s = d.schema();
    let r1 = PSkylineRelation::parse("(A1 & A3) * A2", s).unwrap();
    let r2 = PSkylineRelation::parse("(A2 & A1) * A3", s).unwrap();
    let sky = PSkylineRelation::skyline(3);
    assert_eq!(r1.graph().edges(), [(0, 2)]);
    assert_eq!(r2.graph().edges(), [(1, 0)]);
    assert_eq!(winnow(&sky, &d).unwrap().ids(), ["t1", "t2", "t3"]);
    assert_eq!(winnow(&r1, &d).unwrap().ids(), ["t1", "t2"]);
    assert_eq!(winnow(&r2, &d).unwrap().ids(), ["t2", "t3"]);
    assert!(contains(sky.graph(), r1.graph()).unwrap());
    assert!(!contains(r1.graph(), r2.graph()).unwrap());
    assert!(!contains(r2.graph(), r1.graph()).unwrap());
}

#[test]
fn negative_constraints_for_cars() {
    let d = cars();
    let s = d.schema();
    let n = build_negative(&["t3"], &d).unwrap();
    let got: Vec<(AttrSet, AttrSet, (String, String))> = n
        .constraints()
        .iter()
        .map(|c| (c.lhs, c.rhs, c.provenance[0].clone()))
        .collect();
    let why = |a: &str| (a.to_string(), "t3".to_string());
    assert_eq!(
        got,
        vec![
            (set(s, &["make"]), set(s, &["price"]), why("t1")),
            (set(s, &["make", "year"]), set(s, &["price"]), why("t2")),
            (set(s, &["make", "year"]), set(s, &["price"]), why("t4")),
            (set(s, &["make"]), set(s, &["price", "year"]), why("t5")),
        ]
    );

    let merged = n.dedup();
    assert_eq!(merged.len(), 3);
    assert_eq!(merged.constraints()[1].provenance.len(), 2);

    let reduced = n.remove_redundant();
    assert_eq!(reduced.len(), 1);
    assert_eq!(
        (reduced.constraints()[0].lhs, reduced.constraints()[0].rhs),
        (set(s, &["make", "year"]), set(s, &["price"]))
    );
    assert_eq!((n.dedup().len(), reduced.len()), (3, 1));

    let sky = reduce_via_skyline(&["t3"], &d).unwrap();
    assert_eq!(sky.len(), 3);
    assert!(sky.constraints().iter().all(|c| c.provenance[0].0 != "t5"));

    let json = reduced.to_json(s);
    assert_eq!(json[0]["lhs"], serde_json::json!(["make", "year"]));
    assert_eq!(json[0]["why"], serde_json::json!(["t2", "t3"]));
}

#[test]
fn positive_constraint_for_cars() {
    let d = cars();
    let s = d.schema();
    let p = build_positive(&["t4"], &["t1", "t3"], &d).unwrap();
    assert_eq!(p.len(), 1);
    assert_eq!(
        p[0].disjuncts,
        vec![
            (set(s, &["price"]), set(s, &["year"])),
            (set(s, &["price"]), set(s, &["make", "year"])),
        ]
    );
    // The second disjunct implies the first, so the disjunction is the weaker one.
    assert_eq!(
        p[0].simplified().disjuncts,
        vec![(set(s, &["price"]), set(s, &["year"]))]
    );
    let total = PSkylineRelation::parse("price & year & make", s).unwrap();
    assert!(satisfies(total.graph(), &p));
    assert!(!satisfies(&PGraph::empty(3), &p));
}

#[test]
fn constraint_pipeline_on_four_attributes() {
    let d = numeric(4, &[&[0, 0, 0, 0], &[1, 0, -1, 0], &[-1, 1, -1, 0], &[1, 0, 1, -1]]);
    let s = d.schema();
    let n = build_negative(&["t1"], &d).unwrap();
    let sides: Vec<_> = n.constraints().iter().map(|c| (c.lhs, c.rhs)).collect();
    assert_eq!(
        sides,
        vec![
            (set(s, &["A1"]), set(s, &["A3"])),
            (set(s, &["A2"]), set(s, &["A1", "A3"])),
            (set(s, &["A1", "A3"]), set(s, &["A4"])),
        ]
    );
    let g = PGraph::new(Digraph::from_edges(4, &[(1, 2)])).unwrap();
    assert!(satisfies(&g, &n));
    let m = n.minimize_wrt(&g).unwrap();
    assert_eq!(m.constraints()[1].rhs, set(s, &["A1"]));
    assert!(!m.check_new_edges(3, set(s, &["A1"]), AttrSet::EMPTY));
    assert!(!m.check_new_edges(3, set(s, &["A3"]), AttrSet::EMPTY));
    assert!(m.check_new_edges(3, set(s, &["A2"]), AttrSet::EMPTY));
    let with_a1_a3 = PGraph::new(Digraph::from_edges(4, &[(0, 2)])).unwrap();
    assert!(!satisfies(&with_a1_a3, &n));
    assert!(satisfies(&PGraph::empty(4), &NegSystem::default()));
}

#[test]
fn elicitation_trace_on_cars() {
    let d = cars();
    let s = d.schema();
    let order = vec![0, 1, 2];
    let e = elicit(&["t3"], &d, &ElicitConfig::with_order(order)).unwrap();
    let shown: Vec<String> = e.steps.iter().map(|st| st.tree.display(s).to_string()).collect();
    assert_eq!(
        shown,
        [
            "(price & make) * year",
            "price & (year * make)",
            "price & make & year"
        ]
    );
    assert_eq!(e.steps[0].application.rule, Rule::R3);
    assert_eq!(e.steps[1].application.rule, Rule::R1);
    assert_eq!(e.steps[2].application.rule, Rule::R3);
    assert_eq!(winnow_ids(&e.relation, &d), ["t3"]);
}

#[test]
fn favoring_existence() {
    let d = cars();
    assert!(exists_favoring(&["t4"], &d).unwrap());
    assert!(!exists_favoring(&["t5"], &d).unwrap());
    assert!(exists_favoring::<&str>(&[], &d).unwrap());
    let err = elicit(&["t5"], &d, &ElicitConfig::default()).unwrap_err();
    assert!(matches!(err, Error::NotFavorable { ref superior, .. } if superior == "t5"));
}

#[test]
fn exhaustive_solvers_on_cars() {
    let d = cars();
    let s = d.schema();
    let witness = brute_force_df(&["t4"], &["t3"], &d, 5).unwrap().unwrap();
    let w = winnow_ids(&witness, &d);
    assert!(w.contains(&"t4".to_string()) && !w.contains(&"t3".to_string()));
    let given = PSkylineRelation::parse("year & (price * make)", s).unwrap();
    assert!(given.dominates(&d.tuples()[3], &d.tuples()[2]));

    let best = brute_force_opt_fdf(&["t4"], &["t3"], &d, 5).unwrap().unwrap();
    assert_eq!(best.display(s).to_string(), "year & price & make");
    assert_eq!(winnow_ids(&best, &d), ["t4"]);

    assert!(brute_force_df::<_, &str>(&["t5"], &[], &d, 5).unwrap().is_none());
    assert!(brute_force_df::<_, &str>(&["t4"], &[], &d, 5).unwrap().is_some());
    assert!(matches!(
        brute_force_df::<_, &str>(&["t4"], &[], &d, 2),
        Err(Error::TooWide { width: 3, limit: 2 })
    ));
}
