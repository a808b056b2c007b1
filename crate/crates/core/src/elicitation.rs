//! Eliciting a maximal p-skyline relation from superior examples.
//!
//! Starting from the skyline relation, attributes are admitted one at a time.
//! Each newly admitted attribute `A` is pushed against the already admitted
//! set `M` with rules 1 to 3, as long as the added edges (all touching `A`)
//! keep the negative constraint system satisfied. The system is kept minimal
//! with respect to the current relation, so every check looks at one
//! constraint at a time.
//!
//! Exhaustive solvers for the variants with inferior examples enumerate all
//! p-graphs and are limited to five attributes.

use crate::attrset::AttrSet;
use crate::constraints::{self, build_positive, negative_from_positions, NegSystem, Satisfiable};
use crate::dominance::{skyline_positions, winnow_positions, PSkylineRelation};
use crate::error::{Error, Result};
use crate::extension::{apply_rule, extension_chain_bound, Rule, RuleApplication};
use crate::model::Dataset;
use crate::pexpr::{Op, PExpr, SyntaxTree};
use crate::pgraph::{validate, Digraph, PGraph};

/// Widest schema the exhaustive solvers accept.
pub const BRUTE_FORCE_LIMIT: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElicitConfig {
    /// Order in which attributes are admitted; schema order when `None`.
    pub order: Option<Vec<usize>>,
    /// Under a Pareto parent, try rule 1 on a prioritized sibling before rule 2.
    pub rule1_first: bool,
    /// Under a Pareto parent, try placing `A` below a leaf sibling before above it.
    pub below_leaf_first: bool,
    /// Build constraints against the skyline of the pool only.
    pub skyline_pool: bool,
    /// Drop constraints implied by another single constraint.
    pub remove_redundant: bool,
}

impl Default for ElicitConfig {
    fn default() -> Self {
        ElicitConfig {
            order: None,
            rule1_first: true,
            below_leaf_first: true,
            skyline_pool: false,
            remove_redundant: false,
        }
    }
}

impl ElicitConfig {
    pub fn with_order(order: Vec<usize>) -> Self {
        ElicitConfig {
            order: Some(order),
            ..Self::default()
        }
    }

    pub fn reduced(mut self) -> Self {
        self.skyline_pool = true;
        self.remove_redundant = true;
        self
    }

    fn resolved_order(&self, n: usize) -> Result<Vec<usize>> {
        match &self.order {
            None => Ok((0..n).collect()),
            Some(order) => {
                let set: AttrSet = order.iter().copied().filter(|&a| a < n).collect();
                if order.len() != n || set != AttrSet::full(n) {
                    return Err(Error::Precondition(
                        "attribute order must list every attribute exactly once".into(),
                    ));
                }
                Ok(order.clone())
            }
        }
    }
}

/// One successful rule application.
#[derive(Debug, Clone)]
pub struct ElicitStep {
    pub attribute: usize,
    pub application: RuleApplication,
    pub added: Vec<(usize, usize)>,
    pub tree: SyntaxTree,
}

#[derive(Debug, Clone)]
pub struct Elicitation {
    pub relation: PSkylineRelation,
    /// The constraint system the run started from.
    pub constraints: NegSystem,
    /// The system after the final minimization.
    pub residual: NegSystem,
    pub steps: Vec<ElicitStep>,
    /// Admitted attributes and the p-graph reached after each admission.
    pub stages: Vec<(AttrSet, PGraph)>,
}

/// Some p-skyline relation keeps every tuple of `superior` undominated in
/// `pool` iff they all lie in the skyline of `pool`.
pub fn exists_favoring<S: AsRef<str>>(superior: &[S], pool: &Dataset) -> Result<bool> {
    let g = pool.positions(superior)?;
    Ok(constraints::check_in_skyline(&g, pool).is_ok())
}

/// Computes a maximal p-skyline relation under which every tuple of
/// `superior` is in the winnow of `pool`.
///
/// With no superior examples every relation qualifies, and the result is the
/// prioritized chain of the attribute order.
pub fn elicit<S: AsRef<str>>(superior: &[S], pool: &Dataset, config: &ElicitConfig) -> Result<Elicitation> {
    let n = pool.schema().len();
    let order = config.resolved_order(n)?;
    let g = pool.positions(superior)?;
    constraints::check_in_skyline(&g, pool)?;

    let mut sys = if config.skyline_pool {
        let sky = pool.subset(&skyline_positions(pool.tuples()));
        let ids: Vec<&str> = g.iter().map(|&i| pool.tuples()[i].id()).collect();
        negative_from_positions(&sky.positions(&ids)?, &sky)
    } else {
        negative_from_positions(&g, pool)
    };
    if config.remove_redundant {
        sys = sys.remove_redundant();
    }
    let initial = sys.clone();

    let mut tree = PExpr::node(Op::Pareto, order.iter().map(|&a| PExpr::Leaf(a)).collect()).normalize();
    let mut m = AttrSet::singleton(order[0]);
    let mut steps = Vec::new();
    let mut stages = vec![(m, PGraph::empty(n))];
    let cap = extension_chain_bound(n);
    for &a in &order[1..] {
        let mut rounds = 0;
        while let Some((next, app)) = push(&tree, m, a, &mut sys, config)? {
            rounds += 1;
            if rounds > cap {
                return Err(Error::Internal("push did not terminate".into()));
            }
            let before = PGraph::from_tree(&tree, n);
            let after = PGraph::from_tree(&next, n);
            steps.push(ElicitStep {
                attribute: a,
                application: app,
                added: before.added_edges(&after),
                tree: next.clone(),
            });
            tree = next;
        }
        m.insert(a);
        stages.push((m, PGraph::from_tree(&tree, n)));
    }

    let relation = PSkylineRelation::new(tree.expr(), n)?;
    if !initial.satisfied_by(relation.graph()) {
        return Err(Error::Internal("elicited relation violates its constraints".into()));
    }
    Ok(Elicitation {
        relation,
        constraints: initial,
        residual: sys,
        steps,
        stages,
    })
}

/// Tries one rule application adding edges between `a` and `m`. On success
/// returns the new normalized tree and minimizes `sys` for it.
pub fn push(
    tree: &SyntaxTree,
    m: AttrSet,
    a: usize,
    sys: &mut NegSystem,
    config: &ElicitConfig,
) -> Result<Option<(SyntaxTree, RuleApplication)>> {
    let path = tree
        .leaf_path(a)
        .ok_or_else(|| Error::Internal(format!("attribute {a} missing from tree")))?;
    let Some((&a_idx, parent_path)) = path.split_last() else {
        return Ok(None);
    };
    let parent = tree.at(parent_path).expect("parent of a leaf exists");
    let only_a = AttrSet::singleton(a);

    let attempt = |sys: &mut NegSystem, app: RuleApplication, u: AttrSet, d: AttrSet| -> Result<_> {
        let next = apply_rule(tree, &app)?;
        sys.minimize(u, d);
        Ok(Some((next, app)))
    };

    if let PExpr::Prior(siblings) = parent {
        let Some((&ci, r_path)) = parent_path.split_last() else {
            return Ok(None);
        };
        let r = tree.at(r_path).expect("grandparent exists");
        let first = a_idx == 0;
        let last = a_idx == siblings.len() - 1;
        if !first && !last {
            return Ok(None);
        }
        for (j, cj) in r.children().iter().enumerate() {
            let vj = cj.vars();
            if j == ci || !vj.is_subset(m) {
                continue;
            }
            let app = |rule| RuleApplication {
                rule,
                path: r_path.to_vec(),
                i: ci,
                j,
            };
            if first {
                if sys.check_new_edges(a, AttrSet::EMPTY, vj) {
                    return attempt(sys, app(Rule::R1), only_a, vj);
                }
            } else if sys.check_new_edges(a, vj, AttrSet::EMPTY) {
                return attempt(sys, app(Rule::R2), vj, only_a);
            }
        }
        return Ok(None);
    }

    for (i, ci) in parent.children().iter().enumerate() {
        let vi = ci.vars();
        if i == a_idx || !vi.is_subset(m) {
            continue;
        }
        let at = |rule, i, j| RuleApplication {
            rule,
            path: parent_path.to_vec(),
            i,
            j,
        };
        match ci {
            PExpr::Prior(ns) => {
                let v1 = ns[0].vars();
                let vm = ns[ns.len() - 1].vars();
                let mut tries = [
                    (at(Rule::R1, i, a_idx), v1, AttrSet::EMPTY, v1, only_a),
                    (at(Rule::R2, i, a_idx), AttrSet::EMPTY, vm, only_a, vm),
                ];
                if !config.rule1_first {
                    tries.reverse();
                }
                for (app, parents, children, u, d) in tries {
                    if sys.check_new_edges(a, parents, children) {
                        return attempt(sys, app, u, d);
                    }
                }
            }
            _ => {
                let mut tries = [
                    (at(Rule::R3, i, a_idx), vi, AttrSet::EMPTY, vi, only_a),
                    (at(Rule::R3, a_idx, i), AttrSet::EMPTY, vi, only_a, vi),
                ];
                if !config.below_leaf_first {
                    tries.reverse();
                }
                for (app, parents, children, u, d) in tries {
                    if sys.check_new_edges(a, parents, children) {
                        return attempt(sys, app, u, d);
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Every p-graph over `n ≤ 5` attributes, by edge count then lexicographic
/// edge list.
pub fn enumerate_pgraphs(n: usize) -> Result<Vec<PGraph>> {
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooWide {
            width: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let total = 3usize.pow(pairs.len() as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut g = Digraph::empty(n);
        let mut c = code;
        for &(a, b) in &pairs {
            match c % 3 {
                1 => g.add_edge(a, b),
                2 => g.add_edge(b, a),
                _ => {}
            }
            c /= 3;
        }
        if validate(&g).is_ok() {
            out.push(PGraph::new(g)?);
        }
    }
    out.sort_by_cached_key(|g| (g.edge_count(), g.edges()));
    Ok(out)
}

/// Every p-skyline relation over `n ≤ 5` attributes, in `enumerate_pgraphs`
/// order.
pub fn enumerate_all_pskylines(n: usize) -> Result<Vec<PSkylineRelation>> {
    enumerate_pgraphs(n)?
        .into_iter()
        .map(PSkylineRelation::from_graph)
        .collect()
}

fn brute_force<S: AsRef<str>, T: AsRef<str>>(
    superior: &[S],
    inferior: &[T],
    pool: &Dataset,
    limit: usize,
    largest_first: bool,
) -> Result<Option<PSkylineRelation>> {
    let n = pool.schema().len();
    let limit = limit.min(BRUTE_FORCE_LIMIT);
    if n > limit {
        return Err(Error::TooWide { width: n, limit });
    }
    let g = pool.positions(superior)?;
    let neg = negative_from_positions(&g, pool);
    let pos = build_positive(inferior, superior, pool)?;
    let mut graphs = enumerate_pgraphs(n)?;
    if largest_first {
        graphs.sort_by_cached_key(|g| (std::cmp::Reverse(g.edge_count()), g.edges()));
    }
    graphs
        .into_iter()
        .find(|gr| neg.satisfied_by(gr) && pos.satisfied_by(gr))
        .map(PSkylineRelation::from_graph)
        .transpose()
}

/// Some relation favoring `superior` and disfavoring `inferior` in `pool`:
/// superior tuples stay undominated and each inferior tuple is dominated by a
/// superior one. Searches all p-graphs, fewest edges first.
pub fn brute_force_df<S: AsRef<str>, T: AsRef<str>>(
    superior: &[S],
    inferior: &[T],
    pool: &Dataset,
    limit: usize,
) -> Result<Option<PSkylineRelation>> {
    brute_force(superior, inferior, pool, limit, false)
}

/// A maximal relation favoring `superior` and disfavoring `inferior`.
pub fn brute_force_opt_fdf<S: AsRef<str>, T: AsRef<str>>(
    superior: &[S],
    inferior: &[T],
    pool: &Dataset,
    limit: usize,
) -> Result<Option<PSkylineRelation>> {
    brute_force(superior, inferior, pool, limit, true)
}

/// Ids of the winnow of `pool` under `rel`.
pub fn winnow_ids(rel: &PSkylineRelation, pool: &Dataset) -> Vec<String> {
    winnow_positions(rel.graph(), pool.tuples())
        .into_iter()
        .map(|i| pool.tuples()[i].id().to_string())
        .collect()
}
