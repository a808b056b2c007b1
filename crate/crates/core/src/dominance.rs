//! Dominance testing, winnow and skyline evaluation.
//!
//! The fast test works on attribute sets only: `o1` dominates `o2` iff the
//! tuples differ and every attribute where `o2` is better lies below some
//! attribute where `o1` is better. Two slower oracles compute the same
//! relation from first principles: structural recursion over the expression,
//! and reachability through single-attribute improvement steps.

use std::collections::{HashMap, VecDeque};

use crate::attrset::AttrSet;
use crate::error::{Error, Result};
use crate::model::{Dataset, Schema, Tuple};
use crate::pexpr::{self, PExpr, SyntaxTree};
use crate::pgraph::PGraph;

/// A full p-skyline relation: a normalized tree and its p-graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PSkylineRelation {
    tree: SyntaxTree,
    graph: PGraph,
}

impl PSkylineRelation {
    /// Wraps an expression that must use every one of the `n` attributes.
    pub fn new(expr: &PExpr, n: usize) -> Result<PSkylineRelation> {
        expr.check(n)?;
        if expr.vars() != AttrSet::full(n) {
            let missing = AttrSet::full(n) - expr.vars();
            return Err(Error::Precondition(format!(
                "expression is not full: attributes {missing:?} are unused"
            )));
        }
        let tree = expr.normalize();
        let graph = PGraph::from_tree(&tree, n);
        Ok(PSkylineRelation { tree, graph })
    }

    /// Parses and wraps an expression over `schema`.
    pub fn parse(text: &str, schema: &Schema) -> Result<PSkylineRelation> {
        PSkylineRelation::new(&pexpr::parse(text, schema)?, schema.len())
    }

    pub fn from_graph(graph: PGraph) -> Result<PSkylineRelation> {
        let tree = graph.to_expr()?;
        Ok(PSkylineRelation { tree, graph })
    }

    /// The skyline relation over `n` attributes.
    pub fn skyline(n: usize) -> PSkylineRelation {
        PSkylineRelation {
            tree: pexpr::skyline_over(n),
            graph: PGraph::empty(n),
        }
    }

    pub fn tree(&self) -> &SyntaxTree {
        &self.tree
    }

    pub fn graph(&self) -> &PGraph {
        &self.graph
    }

    pub fn width(&self) -> usize {
        self.graph.len()
    }

    pub fn display<'a>(&'a self, schema: &'a Schema) -> pexpr::Display<'a> {
        self.tree.display(schema)
    }

    #[inline]
    pub fn dominates(&self, o1: &Tuple, o2: &Tuple) -> bool {
        dominates(&self.graph, o1, o2)
    }
}

/// Attributes on which `o1` is strictly better than `o2`.
#[inline]
pub fn bet_in(o1: &Tuple, o2: &Tuple) -> AttrSet {
    bet_in_scores(o1.scores(), o2.scores())
}

#[inline]
pub fn bet_in_scores(s1: &[i64], s2: &[i64]) -> AttrSet {
    debug_assert_eq!(s1.len(), s2.len());
    let mut bits = 0u64;
    for (i, (a, b)) in s1.iter().zip(s2).enumerate() {
        bits |= ((a > b) as u64) << i;
    }
    AttrSet::from_bits(bits)
}

/// Attributes on which the tuples differ.
pub fn diff(o1: &Tuple, o2: &Tuple) -> AttrSet {
    bet_in(o1, o2) | bet_in(o2, o1)
}

/// Differing attributes with no differing ancestor in the p-graph.
pub fn top(g: &PGraph, o1: &Tuple, o2: &Tuple) -> AttrSet {
    let d = diff(o1, o2);
    d - g.children(d)
}

/// `o1 ≻ o2` under the relation with p-graph `g`.
#[inline]
pub fn dominates(g: &PGraph, o1: &Tuple, o2: &Tuple) -> bool {
    dominates_scores(g, o1.scores(), o2.scores())
}

#[inline]
pub fn dominates_scores(g: &PGraph, s1: &[i64], s2: &[i64]) -> bool {
    let better = bet_in_scores(s1, s2);
    let worse = bet_in_scores(s2, s1);
    !(better | worse).is_empty() && g.children(better).is_superset(worse)
}

/// Same relation, phrased as "`o1` wins on every topmost differing attribute".
pub fn dominates_via_top(g: &PGraph, o1: &Tuple, o2: &Tuple) -> bool {
    let t = top(g, o1, o2);
    !t.is_empty() && bet_in(o1, o2).is_superset(t)
}

/// Oracle: evaluates the relation induced by the expression directly, folding
/// each n-ary node into nested binary accumulations.
pub fn dominates_semantic(tree: &SyntaxTree, o1: &Tuple, o2: &Tuple) -> bool {
    semantic(tree.expr(), o1.scores(), o2.scores())
}

fn equal_on(vars: AttrSet, s1: &[i64], s2: &[i64]) -> bool {
    vars.iter().all(|a| s1[a] == s2[a])
}

fn semantic(e: &PExpr, s1: &[i64], s2: &[i64]) -> bool {
    match e {
        PExpr::Leaf(a) => s1[*a] > s2[*a],
        PExpr::Prior(c) => fold_binary(c, s1, s2, |l, r, s1, s2| {
            // l & r: l decides, r breaks ties on Var(l)
            l.dom(s1, s2) || (equal_on(l.vars, s1, s2) && r.dom(s1, s2))
        }),
        PExpr::Pareto(c) => fold_binary(c, s1, s2, |l, r, s1, s2| {
            let (dl, dr) = (l.dom(s1, s2), r.dom(s1, s2));
            let (el, er) = (equal_on(l.vars, s1, s2), equal_on(r.vars, s1, s2));
            (dl && er) || (dr && el) || (dl && dr)
        }),
    }
}

/// One operand of a binary accumulation: either a subexpression or an
/// already-folded prefix of siblings.
struct Operand<'a> {
    parts: &'a [PExpr],
    vars: AttrSet,
    combine: Combine,
}

type Combine = fn(&Operand, &Operand, &[i64], &[i64]) -> bool;

impl Operand<'_> {
    fn dom(&self, s1: &[i64], s2: &[i64]) -> bool {
        match self.parts {
            [single] => semantic(single, s1, s2),
            parts => {
                let (init, last) = parts.split_at(parts.len() - 1);
                let l = Operand {
                    parts: init,
                    vars: init.iter().fold(AttrSet::EMPTY, |v, e| v | e.vars()),
                    combine: self.combine,
                };
                let r = Operand {
                    parts: last,
                    vars: last[0].vars(),
                    combine: self.combine,
                };
                (self.combine)(&l, &r, s1, s2)
            }
        }
    }
}

fn fold_binary(children: &[PExpr], s1: &[i64], s2: &[i64], combine: Combine) -> bool {
    Operand {
        parts: children,
        vars: AttrSet::EMPTY,
        combine,
    }
    .dom(s1, s2)
}

/// Oracle: `o1 ≻ o2` iff `o2` is reachable from `o1` through steps that make
/// one attribute `A` strictly worse while keeping every attribute outside
/// `{A} ∪ children(A)` unchanged. Every intermediate tuple must belong to
/// `universe`, which should be a full grid for the result to be meaningful.
pub fn dominates_decomposition(
    g: &PGraph,
    o1: &Tuple,
    o2: &Tuple,
    universe: &Dataset,
) -> Result<bool> {
    let index: HashMap<&[i64], usize> = universe
        .tuples()
        .iter()
        .enumerate()
        .map(|(i, t)| (t.scores(), i))
        .collect();
    let find = |t: &Tuple| {
        index
            .get(t.scores())
            .copied()
            .ok_or_else(|| Error::UnknownId(t.id().to_string()))
    };
    let (from, to) = (find(o1)?, find(o2)?);
    Ok(reachable_from(g, universe.tuples(), from)[to])
}

/// Single-step relation of the decomposition oracle.
pub fn decomposition_step(g: &PGraph, s1: &[i64], s2: &[i64]) -> bool {
    let n = g.len();
    (0..n).any(|a| {
        s1[a] > s2[a] && {
            let free = g.children_of(a).with(a);
            equal_on(free.complement(n), s1, s2)
        }
    })
}

fn reachable_from(g: &PGraph, tuples: &[Tuple], from: usize) -> Vec<bool> {
    let mut seen = vec![false; tuples.len()];
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        for (v, t) in tuples.iter().enumerate() {
            if !seen[v] && decomposition_step(g, tuples[u].scores(), t.scores()) {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

/// Full dominance matrix of the decomposition oracle over `universe`.
pub fn decomposition_closure(g: &PGraph, universe: &Dataset) -> Vec<Vec<bool>> {
    (0..universe.len())
        .map(|i| reachable_from(g, universe.tuples(), i))
        .collect()
}

fn check_width(g: &PGraph, data: &Dataset) -> Result<()> {
    if g.len() != data.schema().len() {
        return Err(Error::SchemaMismatch {
            left: g.len(),
            right: data.schema().len(),
        });
    }
    Ok(())
}

/// Positions of the tuples not dominated by any tuple of `tuples`, ascending.
pub fn winnow_positions(g: &PGraph, tuples: &[Tuple]) -> Vec<usize> {
    (0..tuples.len())
        .filter(|&i| {
            !tuples
                .iter()
                .any(|o| dominates_scores(g, o.scores(), tuples[i].scores()))
        })
        .collect()
}

/// Tuples of `data` not dominated under `rel`, in input order.
pub fn winnow(rel: &PSkylineRelation, data: &Dataset) -> Result<Dataset> {
    check_width(rel.graph(), data)?;
    Ok(data.subset(&winnow_positions(rel.graph(), data.tuples())))
}

/// `s1` Pareto-dominates `s2`.
#[inline]
pub fn pareto_dominates(s1: &[i64], s2: &[i64]) -> bool {
    let mut strict = false;
    for (a, b) in s1.iter().zip(s2) {
        if a < b {
            return false;
        }
        strict |= a > b;
    }
    strict
}

/// Skyline positions by block-nested-loop, ascending.
pub fn skyline_positions(tuples: &[Tuple]) -> Vec<usize> {
    let mut window: Vec<usize> = Vec::new();
    'next: for (i, t) in tuples.iter().enumerate() {
        let mut k = 0;
        while k < window.len() {
            let w = tuples[window[k]].scores();
            if pareto_dominates(w, t.scores()) {
                continue 'next;
            }
            if pareto_dominates(t.scores(), w) {
                window.swap_remove(k);
            } else {
                k += 1;
            }
        }
        window.push(i);
    }
    window.sort_unstable();
    window
}

pub fn skyline(data: &Dataset) -> Dataset {
    data.subset(&skyline_positions(data.tuples()))
}

/// Some tuple of `tuples` Pareto-dominating `t`, if any.
pub fn pareto_dominator<'a>(tuples: &'a [Tuple], t: &Tuple) -> Option<&'a Tuple> {
    tuples
        .iter()
        .find(|o| pareto_dominates(o.scores(), t.scores()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn fig4() -> (Schema, PSkylineRelation, Vec<Tuple>) {
        let s = Schema::uniform(7).unwrap();
        let rel = PSkylineRelation::parse("(A1 & A2) * ((A3 * A5) & (A4 * (A6 & A7)))", &s).unwrap();
        let t = vec![
            Tuple::numeric(&s, "t1", &[1, 1, 1, 1, 1, 1, 1]).unwrap(),
            Tuple::numeric(&s, "t2", &[2, 0, 1, 0, 2, 1, 0]).unwrap(),
            Tuple::numeric(&s, "t3", &[2, 0, 1, 0, 1, 2, 0]).unwrap(),
        ];
        (s, rel, t)
    }

    #[test]
    fn figure_graph_edges() {
        let (s, rel, _) = fig4();
        let names: Vec<(&str, &str)> = rel
            .graph()
            .edges()
            .into_iter()
            .map(|(a, b)| (s.name(a), s.name(b)))
            .collect();
        assert_eq!(
            names,
            vec![
                ("A1", "A2"),
                ("A3", "A4"),
                ("A3", "A6"),
                ("A3", "A7"),
                ("A5", "A4"),
                ("A5", "A6"),
                ("A5", "A7"),
                ("A6", "A7"),
            ]
        );
    }

    #[test]
    fn bet_in_diff_top() {
        let (s, rel, t) = fig4();
        let set = |n: &[&str]| s.attr_set(n).unwrap();
        assert_eq!(bet_in(&t[0], &t[1]), set(&["A2", "A4", "A7"]));
        assert_eq!(bet_in(&t[1], &t[0]), set(&["A1", "A5"]));
        assert_eq!(top(rel.graph(), &t[0], &t[1]), set(&["A1", "A5"]));
        assert_eq!(diff(&t[0], &t[2]), set(&["A1", "A2", "A4", "A6", "A7"]));
        assert_eq!(top(rel.graph(), &t[0], &t[2]), set(&["A1", "A4", "A6"]));
        assert!(bet_in(&t[0], &t[0]).is_empty());
        assert!(diff(&t[0], &t[0]).is_empty());
    }

    #[test]
    fn dominance_table() {
        let (_, rel, t) = fig4();
        for (i, j, expected) in [(1, 0, true), (0, 1, false), (2, 0, false), (0, 2, false)] {
            assert_eq!(rel.dominates(&t[i], &t[j]), expected);
            assert_eq!(dominates_semantic(rel.tree(), &t[i], &t[j]), expected);
            assert_eq!(dominates_via_top(rel.graph(), &t[i], &t[j]), expected);
        }
        assert!(!rel.dominates(&t[0], &t[0]));
    }

    #[test]
    fn skyline_edge_cases() {
        let s = Arc::new(Schema::uniform(2).unwrap());
        let grid = Dataset::new(
            s.clone(),
            vec![
                Tuple::numeric(&s, "a", &[0, 2]).unwrap(),
                Tuple::numeric(&s, "b", &[1, 1]).unwrap(),
                Tuple::numeric(&s, "c", &[2, 0]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(skyline(&grid).ids(), vec!["a", "b", "c"]);
        let one = grid.subset(&[1]);
        assert_eq!(skyline(&one).ids(), vec!["b"]);
        let dup = Dataset::new(
            s.clone(),
            vec![
                Tuple::numeric(&s, "x", &[1, 1]).unwrap(),
                Tuple::numeric(&s, "y", &[1, 1]).unwrap(),
                Tuple::numeric(&s, "z", &[0, 0]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(skyline(&dup).ids(), vec!["x", "y"]);
        let rel = PSkylineRelation::parse("A1 & A2", &s).unwrap();
        assert_eq!(winnow(&rel, &dup).unwrap().ids(), vec!["x", "y"]);
    }

    #[test]
    fn rejects_partial_expressions() {
        let s = Schema::uniform(3).unwrap();
        assert!(matches!(
            PSkylineRelation::parse("A1 & A2", &s),
            Err(Error::Precondition(_))
        ));
    }
}
