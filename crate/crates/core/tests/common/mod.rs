#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use pskyline::{AttrSet, Dataset, PExpr, PGraph, Schema, Tuple};
use rand::Rng;

pub const CARS_SCHEMA: &str = include_str!("../../data/cars.schema.json");
pub const CARS_CSV: &str = include_str!("../../data/cars.csv");

pub fn cars() -> Dataset {
    let schema = Arc::new(Schema::from_json(CARS_SCHEMA).unwrap());
    Dataset::from_csv(schema, CARS_CSV).unwrap()
}

pub fn numeric(n: usize, rows: &[&[i64]]) -> Dataset {
    let s = Arc::new(Schema::uniform(n).unwrap());
    let tuples = rows
        .iter()
        .enumerate()
        .map(|(i, r)| Tuple::numeric(&s, format!("t{}", i + 1), r).unwrap())
        .collect();
    Dataset::new(s, tuples).unwrap()
}

/// Every tuple of `{0, .., k-1}^n`.
pub fn grid(n: usize, k: i64) -> Dataset {
    let s = Arc::new(Schema::uniform(n).unwrap());
    let total = (k as usize).pow(n as u32);
    let tuples = (0..total)
        .map(|code| {
            let mut c = code;
            let row: Vec<i64> = (0..n)
                .map(|_| {
                    let v = (c % k as usize) as i64;
                    c /= k as usize;
                    v
                })
                .collect();
            Tuple::numeric(&s, format!("g{code}"), &row).unwrap()
        })
        .collect();
    Dataset::new(s, tuples).unwrap()
}

pub fn random_pool<R: Rng>(rng: &mut R, n: usize, rows: usize, k: i64) -> Dataset {
    let s = Arc::new(Schema::uniform(n).unwrap());
    let tuples = (0..rows)
        .map(|i| {
            let row: Vec<i64> = (0..n).map(|_| rng.random_range(0..k)).collect();
            Tuple::numeric(&s, format!("t{}", i + 1), &row).unwrap()
        })
        .collect();
    Dataset::new(s, tuples).unwrap()
}

/// Every binary p-expression using each attribute of `set` exactly once, built
/// without any normalization.
pub fn binary_expressions(set: AttrSet) -> Vec<PExpr> {
    let members: Vec<usize> = set.iter().collect();
    if members.len() == 1 {
        return vec![PExpr::Leaf(members[0])];
    }
    let mut out = Vec::new();
    let k = members.len();
    for mask in 1..(1u32 << k) - 1 {
        let left: AttrSet = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| members[i]).collect();
        let right = set - left;
        let ls = binary_expressions(left);
        let rs = binary_expressions(right);
        for l in &ls {
            for r in &rs {
                out.push(PExpr::Prior(vec![l.clone(), r.clone()]));
                out.push(PExpr::Pareto(vec![l.clone(), r.clone()]));
            }
        }
    }
    out
}

/// Every digraph over `n` nodes, self-loops included, as edge lists.
pub fn all_digraphs(n: usize) -> impl Iterator<Item = Vec<(usize, usize)>> {
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    (0u64..1 << cells.len()).map(move |mask| {
        cells
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect()
    })
}

/// Minimal strict supersets of `g` among `all`.
pub fn minimal_supersets(g: &PGraph, all: &[PGraph]) -> BTreeSet<Vec<(usize, usize)>> {
    let above: Vec<&PGraph> = all
        .iter()
        .filter(|h| g.is_proper_subgraph_of(h).unwrap())
        .collect();
    above
        .iter()
        .filter(|h| {
            !above
                .iter()
                .any(|k| k.is_proper_subgraph_of(h).unwrap())
        })
        .map(|h| h.edges())
        .collect()
}

/// Ordered pairs `(i, j)` of `universe` with `i ≻ j` by brute-force test.
pub fn relation_pairs(universe: &Dataset, dom: impl Fn(&Tuple, &Tuple) -> bool) -> Vec<Vec<bool>> {
    let t = universe.tuples();
    t.iter()
        .map(|a| t.iter().map(|b| dom(a, b)).collect())
        .collect()
}
