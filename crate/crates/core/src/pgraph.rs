//! p-graphs: attribute-importance digraphs, their validation and the
//! round trip between graphs and syntax trees.
//!
//! A p-graph stores the full (transitive) edge set: `children[a]` is every
//! attribute less important than `a`. Two p-skyline relations are equal iff
//! their p-graphs are, and containment of relations is edge-set inclusion.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::attrset::AttrSet;
use crate::error::{Error, Result};
use crate::model::Schema;
use crate::pexpr::{Op, PExpr, SyntaxTree};

/// An arbitrary directed graph over attribute indices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    succ: Vec<AttrSet>,
}

impl Digraph {
    pub fn empty(n: usize) -> Digraph {
        Digraph {
            succ: vec![AttrSet::EMPTY; n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Digraph {
        let mut g = Digraph::empty(n);
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn from_successors(succ: Vec<AttrSet>) -> Digraph {
        Digraph { succ }
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        self.succ[a].insert(b);
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.succ[a].contains(b)
    }

    pub fn successors(&self, a: usize) -> AttrSet {
        self.succ[a]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(a, s)| s.iter().map(move |b| (a, b)))
            .collect()
    }
}

/// Why a digraph is not a p-graph. Attributes are reported by index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Violation {
    OutOfRange { from: usize, to: usize },
    Reflexive(usize),
    Antisymmetric(usize, usize),
    /// Edges `(a, b)` and `(b, c)` without `(a, c)`.
    NotTransitive(usize, usize, usize),
    /// Edges `(a, b)`, `(c, d)`, `(c, b)` with none of `(c, a)`, `(a, d)`, `(d, b)`.
    Envelope {
        a: usize,
        b: usize,
        c: usize,
        d: usize,
    },
}

impl Violation {
    /// Human-readable report using attribute names.
    pub fn describe(&self, schema: &Schema) -> String {
        let nm = |i: usize| schema.attributes().get(i).map_or("?", |a| a.name.as_str());
        match *self {
            Violation::OutOfRange { from, to } => format!("edge ({from}, {to}) leaves the schema"),
            Violation::Reflexive(a) => format!("self-loop on {}", nm(a)),
            Violation::Antisymmetric(a, b) => {
                format!("edges in both directions between {} and {}", nm(a), nm(b))
            }
            Violation::NotTransitive(a, b, c) => format!(
                "edges ({0}, {1}) and ({1}, {2}) but not ({0}, {2})",
                nm(a),
                nm(b),
                nm(c)
            ),
            Violation::Envelope { a, b, c, d } => format!(
                "envelope fails for A={}, B={}, C={}, D={}",
                nm(a),
                nm(b),
                nm(c),
                nm(d)
            ),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::OutOfRange { from, to } => write!(f, "edge ({from}, {to}) out of range"),
            Violation::Reflexive(a) => write!(f, "self-loop on attribute {a}"),
            Violation::Antisymmetric(a, b) => {
                write!(f, "edges in both directions between attributes {a} and {b}")
            }
            Violation::NotTransitive(a, b, c) => {
                write!(f, "edges ({a}, {b}) and ({b}, {c}) but not ({a}, {c})")
            }
            Violation::Envelope { a, b, c, d } => {
                write!(f, "envelope fails for A={a}, B={b}, C={c}, D={d}")
            }
        }
    }
}

/// Checks irreflexivity, antisymmetry, transitivity and the envelope
/// property, reporting the first violation found in index order.
pub fn validate(g: &Digraph) -> std::result::Result<(), Violation> {
    let n = g.len();
    let all = AttrSet::full(n);
    for a in 0..n {
        if let Some(b) = (g.succ[a] - all).first() {
            return Err(Violation::OutOfRange { from: a, to: b });
        }
    }
    for a in 0..n {
        if g.has_edge(a, a) {
            return Err(Violation::Reflexive(a));
        }
    }
    for a in 0..n {
        for b in g.succ[a] {
            if b > a && g.has_edge(b, a) {
                return Err(Violation::Antisymmetric(a, b));
            }
        }
    }
    for a in 0..n {
        for b in g.succ[a] {
            if let Some(c) = (g.succ[b] - g.succ[a]).first() {
                return Err(Violation::NotTransitive(a, b, c));
            }
        }
    }
    let parents = parents_of(&g.succ);
    for a in 0..n {
        for b in g.succ[a] {
            for c in parents[b] - AttrSet::singleton(a) {
                for d in g.succ[c] - AttrSet::singleton(a) - AttrSet::singleton(b) {
                    if !(g.has_edge(c, a) || g.has_edge(a, d) || g.has_edge(d, b)) {
                        return Err(Violation::Envelope { a, b, c, d });
                    }
                }
            }
        }
    }
    Ok(())
}

fn parents_of(succ: &[AttrSet]) -> Vec<AttrSet> {
    let mut p = vec![AttrSet::EMPTY; succ.len()];
    for (a, s) in succ.iter().enumerate() {
        for b in *s {
            p[b].insert(a);
        }
    }
    p
}

/// A validated p-graph.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PGraph {
    children: Vec<AttrSet>,
}

impl fmt::Debug for PGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.edges()).finish()
    }
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    nodes: Vec<String>,
    edges: Vec<(String, String)>,
}

impl PGraph {
    /// Validates `g` and wraps it.
    pub fn new(g: Digraph) -> Result<PGraph> {
        validate(&g).map_err(Error::InvalidGraph)?;
        Ok(PGraph { children: g.succ })
    }

    /// p-graph with no edges: the skyline relation.
    pub fn empty(n: usize) -> PGraph {
        PGraph {
            children: vec![AttrSet::EMPTY; n],
        }
    }

    /// p-graph of a p-expression over `n` attributes. Attributes absent from
    /// the expression are isolated nodes.
    pub fn from_expr(e: &PExpr, n: usize) -> PGraph {
        fn go(e: &PExpr, ch: &mut [AttrSet]) {
            match e {
                PExpr::Leaf(_) => {}
                PExpr::Pareto(c) => c.iter().for_each(|x| go(x, ch)),
                PExpr::Prior(c) => {
                    let mut below = AttrSet::EMPTY;
                    for x in c.iter().rev() {
                        go(x, ch);
                        for a in x.vars() {
                            ch[a] |= below;
                        }
                        below |= x.vars();
                    }
                }
            }
        }
        let mut children = vec![AttrSet::EMPTY; n];
        go(e, &mut children);
        PGraph { children }
    }

    pub fn from_tree(t: &SyntaxTree, n: usize) -> PGraph {
        PGraph::from_expr(t.expr(), n)
    }

    /// Parses `{"nodes":[..],"edges":[[from,to],..]}`; nodes must match `schema`.
    pub fn from_json(text: &str, schema: &Schema) -> Result<PGraph> {
        let raw: RawGraph = serde_json::from_str(text)?;
        let names: Vec<&str> = raw.nodes.iter().map(String::as_str).collect();
        if names != schema.attributes().iter().map(|a| a.name.as_str()).collect::<Vec<_>>() {
            return Err(Error::Schema("graph nodes must list the schema attributes in order".into()));
        }
        let mut g = Digraph::empty(schema.len());
        for (a, b) in &raw.edges {
            let ia = schema.index_of(a).ok_or_else(|| Error::UnknownAttribute(a.clone()))?;
            let ib = schema.index_of(b).ok_or_else(|| Error::UnknownAttribute(b.clone()))?;
            g.add_edge(ia, ib);
        }
        PGraph::new(g)
    }

    pub fn to_json(&self, schema: &Schema) -> serde_json::Value {
        let raw = RawGraph {
            nodes: schema.attributes().iter().map(|a| a.name.clone()).collect(),
            edges: self
                .edges()
                .into_iter()
                .map(|(a, b)| (schema.name(a).to_string(), schema.name(b).to_string()))
                .collect(),
        };
        serde_json::to_value(raw).expect("graph serializes")
    }

    /// Graphviz rendering, edges pointing from more to less important.
    pub fn to_dot(&self, schema: &Schema) -> String {
        let mut out = String::from("digraph pgraph {\n  rankdir=TB;\n");
        for a in 0..self.len() {
            out.push_str(&format!("  \"{}\";\n", schema.name(a)));
        }
        for (a, b) in self.edges() {
            out.push_str(&format!("  \"{}\" -> \"{}\";\n", schema.name(a), schema.name(b)));
        }
        out.push_str("}\n");
        out
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.children.len()
    }

    pub fn is_empty(&self) -> bool {
        self.children.is_empty()
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.children[a].contains(b)
    }

    /// Direct successors of `a`; the set is already transitively closed.
    #[inline]
    pub fn children_of(&self, a: usize) -> AttrSet {
        self.children[a]
    }

    /// Union of `children_of` over `set`.
    #[inline]
    pub fn children(&self, set: AttrSet) -> AttrSet {
        set.iter().fold(AttrSet::EMPTY, |acc, a| acc | self.children[a])
    }

    pub fn parents_of(&self, a: usize) -> AttrSet {
        (0..self.len()).filter(|&p| self.children[p].contains(a)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.children.iter().map(|s| s.len()).sum()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.children
            .iter()
            .enumerate()
            .flat_map(|(a, s)| s.iter().map(move |b| (a, b)))
            .collect()
    }

    pub fn to_digraph(&self) -> Digraph {
        Digraph {
            succ: self.children.clone(),
        }
    }

    fn same_width(&self, other: &PGraph) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::SchemaMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(())
    }

    /// Edge-set inclusion: the relation of `self` is contained in `other`'s.
    pub fn is_subgraph_of(&self, other: &PGraph) -> Result<bool> {
        self.same_width(other)?;
        Ok(self
            .children
            .iter()
            .zip(&other.children)
            .all(|(a, b)| a.is_subset(*b)))
    }

    /// Strict edge-set inclusion.
    pub fn is_proper_subgraph_of(&self, other: &PGraph) -> Result<bool> {
        Ok(self.is_subgraph_of(other)? && self != other)
    }

    pub fn equals(&self, other: &PGraph) -> Result<bool> {
        self.same_width(other)?;
        Ok(self == other)
    }

    /// Edges of `other` missing from `self`.
    pub fn added_edges(&self, other: &PGraph) -> Vec<(usize, usize)> {
        other
            .edges()
            .into_iter()
            .filter(|&(a, b)| !self.has_edge(a, b))
            .collect()
    }

    /// `x ↣ y`: every node of `x` has an edge to every node of `y`.
    pub fn all_edges(&self, x: AttrSet, y: AttrSet) -> bool {
        x.iter().all(|a| y.is_subset(self.children[a]))
    }

    /// Connected components of the comparability structure restricted to `s`,
    /// ordered by smallest member.
    pub fn components(&self, s: AttrSet) -> Vec<AttrSet> {
        let parents = parents_of(&self.children);
        let mut left = s;
        let mut out = Vec::new();
        while let Some(start) = left.first() {
            let mut comp = AttrSet::singleton(start);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = AttrSet::EMPTY;
                for a in frontier {
                    next |= (self.children[a] | parents[a]) & s;
                }
                frontier = next - comp;
                comp |= next;
            }
            left -= comp;
            out.push(comp);
        }
        out
    }

    /// Reconstructs a syntax tree whose p-graph is `self`.
    pub fn to_expr(&self) -> Result<SyntaxTree> {
        if self.is_empty() {
            return Err(Error::Precondition("a p-graph needs at least one node".into()));
        }
        let e = self.expr_over(AttrSet::full(self.len()))?;
        Ok(e.normalize())
    }

    fn expr_over(&self, s: AttrSet) -> Result<PExpr> {
        if s.len() == 1 {
            return Ok(PExpr::Leaf(s.first().unwrap()));
        }
        let comps = self.components(s);
        if comps.len() > 1 {
            let parts = comps
                .into_iter()
                .map(|c| self.expr_over(c))
                .collect::<Result<Vec<_>>>()?;
            return Ok(PExpr::node(Op::Pareto, parts));
        }
        let top: AttrSet = s
            .iter()
            .filter(|&a| s.iter().all(|p| !self.has_edge(p, a)))
            .collect();
        let m: AttrSet = s
            .iter()
            .filter(|&b| top.iter().all(|t| self.has_edge(t, b)))
            .collect();
        let upper = s - m;
        if m.is_empty() || upper.is_empty() || !self.all_edges(upper, m) {
            return Err(Error::Internal(format!(
                "no typed partition found for attributes {s:?}"
            )));
        }
        Ok(PExpr::node(
            Op::Prior,
            vec![self.expr_over(upper)?, self.expr_over(m)?],
        ))
    }
}

/// Relation of `g1` strictly contained in the relation of `g2`.
pub fn contains(g1: &PGraph, g2: &PGraph) -> Result<bool> {
    g1.is_proper_subgraph_of(g2)
}

pub fn equals(g1: &PGraph, g2: &PGraph) -> Result<bool> {
    g1.equals(g2)
}

/// Evaluates one instance of the set-level envelope implication
/// `A↣B ∧ C↣D ∧ C↣B ⇒ C↣A ∨ A↣D ∨ D↣B`. Each set must be nonempty, the sets
/// pairwise disjoint, and each must induce a single node or a subgraph with
/// at least two comparability components.
pub fn general_envelope_holds(
    g: &PGraph,
    a: AttrSet,
    b: AttrSet,
    c: AttrSet,
    d: AttrSet,
) -> Result<bool> {
    let sets = [a, b, c, d];
    let all = AttrSet::full(g.len());
    for (i, s) in sets.iter().enumerate() {
        if s.is_empty() || !s.is_subset(all) {
            return Err(Error::Precondition("node sets must be nonempty subsets of the graph".into()));
        }
        if sets[..i].iter().any(|t| t.intersects(*s)) {
            return Err(Error::Precondition("node sets must be pairwise disjoint".into()));
        }
        if s.len() > 1 && g.components(*s).len() < 2 {
            return Err(Error::Precondition(format!(
                "node set {s:?} is neither a single node nor a union of disjoint subgraphs"
            )));
        }
    }
    let antecedent = g.all_edges(a, b) && g.all_edges(c, d) && g.all_edges(c, b);
    Ok(!antecedent || g.all_edges(c, a) || g.all_edges(a, d) || g.all_edges(d, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Direction;
    use crate::pexpr::parse;

    fn schema(n: usize) -> Schema {
        let names: Vec<String> = (1..=n).map(|i| format!("A{i}")).collect();
        Schema::numeric(&names, Direction::Higher).unwrap()
    }

    fn graph(text: &str, s: &Schema) -> PGraph {
        PGraph::from_expr(&parse(text, s).unwrap(), s.len())
    }

    #[test]
    fn builds_from_expressions() {
        let s = schema(3);
        assert_eq!(graph("(A1 * A2) & A3", &s).edges(), vec![(0, 2), (1, 2)]);
        assert_eq!(graph("A1 * A2 * A3", &s).edge_count(), 0);
        let s7 = schema(7);
        let g = graph("((A1 * A2 * A3) & (A4 * A5 * A6)) * A7", &s7);
        assert_eq!(g.edge_count(), 9);
        assert!(validate(&g.to_digraph()).is_ok());
    }

    #[test]
    fn reports_violations() {
        let g = Digraph::from_edges(4, &[(0, 1), (2, 3), (2, 1)]);
        assert_eq!(
            validate(&g),
            Err(Violation::Envelope {
                a: 0,
                b: 1,
                c: 2,
                d: 3
            })
        );
        let g = Digraph::from_edges(2, &[(0, 1), (1, 0)]);
        assert_eq!(validate(&g), Err(Violation::Antisymmetric(0, 1)));
        let g = Digraph::from_edges(3, &[(0, 1), (1, 2)]);
        assert_eq!(validate(&g), Err(Violation::NotTransitive(0, 1, 2)));
        let g = Digraph::from_edges(1, &[(0, 0)]);
        assert_eq!(validate(&g), Err(Violation::Reflexive(0)));
    }

    #[test]
    fn reconstructs_expressions() {
        let s = schema(3);
        let g = PGraph::new(Digraph::from_edges(3, &[(0, 2), (1, 2)])).unwrap();
        assert_eq!(g.to_expr().unwrap().display(&s).to_string(), "(A1 * A2) & A3");
        assert_eq!(PGraph::empty(3).to_expr().unwrap().display(&s).to_string(), "A1 * A2 * A3");
        let total = graph("A3 & A2 & A1", &s);
        assert_eq!(total.to_expr().unwrap().display(&s).to_string(), "A3 & A2 & A1");
    }

    #[test]
    fn containment() {
        let s = schema(3);
        let sky = PGraph::empty(3);
        let g1 = graph("(A1 & A3) * A2", &s);
        let g2 = graph("(A2 & A1) * A3", &s);
        assert!(contains(&sky, &g1).unwrap());
        assert!(!contains(&g1, &g2).unwrap());
        assert!(!contains(&g2, &g1).unwrap());
        assert!(equals(&g1, &g1).unwrap());
        assert!(!contains(&g1, &g1).unwrap());
        assert!(matches!(
            contains(&sky, &PGraph::empty(4)),
            Err(Error::SchemaMismatch { left: 3, right: 4 })
        ));
    }

    #[test]
    fn general_envelope_on_figure_graph() {
        let s = schema(7);
        let g = graph("((A1 * A2 * A3) & (A4 * A5 * A6)) * A7", &s);
        let set = |names: &[&str]| s.attr_set(names).unwrap();
        assert!(general_envelope_holds(
            &g,
            set(&["A1"]),
            set(&["A4"]),
            set(&["A2", "A3"]),
            set(&["A5", "A6"])
        )
        .unwrap());
        assert!(g.all_edges(set(&["A1"]), set(&["A5", "A6"])));
        assert!(general_envelope_holds(&g, set(&["A1"]), set(&["A1"]), set(&["A2"]), set(&["A3"])).is_err());
    }

    #[test]
    fn json_and_dot() {
        let s = schema(2);
        let g = graph("A1 & A2", &s);
        let j = g.to_json(&s);
        assert_eq!(j, serde_json::json!({"nodes":["A1","A2"],"edges":[["A1","A2"]]}));
        assert_eq!(PGraph::from_json(&j.to_string(), &s).unwrap(), g);
        assert!(g.to_dot(&s).contains("\"A1\" -> \"A2\";"));
    }
}
