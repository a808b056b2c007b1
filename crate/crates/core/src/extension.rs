//! Minimal p-extensions through syntax-tree transformation rules.
//!
//! Every rule rewrites two children `C_i`, `C_j` of one Pareto node into a
//! single new child; the rewritten tree's p-graph gains a predictable set of
//! edges. Applying each rule at every admissible position yields all minimal
//! extensions of a relation.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::pexpr::{Op, PExpr, SyntaxTree};
use crate::pgraph::PGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `C_i = N1 & .. & Nm` becomes `N1 & (C_j * (N2 & .. & Nm))`.
    R1,
    /// `C_i = N1 & .. & Nm` becomes `(C_j * (N1 & .. & Nm-1)) & Nm`.
    R2,
    /// Two leaves become `C_i & C_j`.
    R3,
    /// `C_i = N1 & .. & Nm`, `C_j = M1 & .. & Mn` become
    /// `((N1..Ns) * (M1..Mt)) & ((Ns+1..Nm) * (Mt+1..Mn))`.
    R4 { s: usize, t: usize },
}

/// Where and how a rule is applied.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RuleApplication {
    pub rule: Rule,
    /// Child-index path from the root to the Pareto node holding both operands.
    pub path: Vec<usize>,
    pub i: usize,
    pub j: usize,
}

impl fmt::Display for RuleApplication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rule {
            Rule::R1 => write!(f, "rule 1")?,
            Rule::R2 => write!(f, "rule 2")?,
            Rule::R3 => write!(f, "rule 3")?,
            Rule::R4 { s, t } => write!(f, "rule 4 (s={s}, t={t})")?,
        }
        write!(f, " at {:?} on children {} and {}", self.path, self.i, self.j)
    }
}

fn shape(msg: impl Into<String>) -> Error {
    Error::RuleShape(msg.into())
}

fn prior(parts: &[PExpr]) -> PExpr {
    PExpr::node(Op::Prior, parts.to_vec())
}

fn operands<'a>(tree: &'a SyntaxTree, app: &RuleApplication) -> Result<(&'a [PExpr], &'a PExpr, &'a PExpr)> {
    let node = tree
        .at(&app.path)
        .ok_or_else(|| shape("path does not name a node"))?;
    let PExpr::Pareto(children) = node else {
        return Err(shape("path does not name a Pareto node"));
    };
    if app.i == app.j {
        return Err(shape("operands must be distinct children"));
    }
    let ci = children.get(app.i).ok_or_else(|| shape("child index out of range"))?;
    let cj = children.get(app.j).ok_or_else(|| shape("child index out of range"))?;
    Ok((children, ci, cj))
}

/// The subtree replacing `C_i` and `C_j`.
fn rewrite(app: &RuleApplication, ci: &PExpr, cj: &PExpr) -> Result<PExpr> {
    match app.rule {
        Rule::R1 | Rule::R2 => {
            let PExpr::Prior(ns) = ci else {
                return Err(shape("rules 1 and 2 need a prioritized node as C_i"));
            };
            let m = ns.len();
            Ok(if app.rule == Rule::R1 {
                PExpr::Prior(vec![
                    ns[0].clone(),
                    PExpr::Pareto(vec![cj.clone(), prior(&ns[1..])]),
                ])
            } else {
                PExpr::Prior(vec![
                    PExpr::Pareto(vec![cj.clone(), prior(&ns[..m - 1])]),
                    ns[m - 1].clone(),
                ])
            })
        }
        Rule::R3 => {
            if !(ci.is_leaf() && cj.is_leaf()) {
                return Err(shape("rule 3 needs two leaves"));
            }
            Ok(PExpr::Prior(vec![ci.clone(), cj.clone()]))
        }
        Rule::R4 { s, t } => {
            let (PExpr::Prior(ns), PExpr::Prior(ms)) = (ci, cj) else {
                return Err(shape("rule 4 needs two prioritized nodes"));
            };
            if s == 0 || s >= ns.len() || t == 0 || t >= ms.len() {
                return Err(shape("rule 4 split positions out of range"));
            }
            Ok(PExpr::Prior(vec![
                PExpr::Pareto(vec![prior(&ns[..s]), prior(&ms[..t])]),
                PExpr::Pareto(vec![prior(&ns[s..]), prior(&ms[t..])]),
            ]))
        }
    }
}

/// Applies one rule, eliminates single-child nodes and renormalizes.
pub fn apply_rule(tree: &SyntaxTree, app: &RuleApplication) -> Result<SyntaxTree> {
    let (children, ci, cj) = operands(tree, app)?;
    let replacement = rewrite(app, ci, cj)?;
    let mut rest: Vec<PExpr> = Vec::with_capacity(children.len() - 1);
    let at = app.i.min(app.j);
    for (k, c) in children.iter().enumerate() {
        if k == at {
            rest.push(replacement.clone());
        } else if k != app.i && k != app.j {
            rest.push(c.clone());
        }
    }
    let new_node = PExpr::node(Op::Pareto, rest);
    Ok(replace_at(tree.expr(), &app.path, new_node).normalize())
}

fn replace_at(e: &PExpr, path: &[usize], with: PExpr) -> PExpr {
    let Some((&first, rest)) = path.split_first() else {
        return with;
    };
    let mut children = e.children().to_vec();
    children[first] = replace_at(&children[first], rest, with);
    PExpr::node(e.op().expect("path runs through composite nodes"), children)
}

/// Edges the application adds to the p-graph, predicted from the tree shape.
pub fn predicted_edges(tree: &SyntaxTree, app: &RuleApplication) -> Result<Vec<(usize, usize)>> {
    let (_, ci, cj) = operands(tree, app)?;
    rewrite(app, ci, cj)?;
    let pairs = |from: &[PExpr], to: &[PExpr]| {
        let x = from.iter().fold(crate::AttrSet::EMPTY, |s, e| s | e.vars());
        let y = to.iter().fold(crate::AttrSet::EMPTY, |s, e| s | e.vars());
        x.iter()
            .flat_map(|a| y.iter().map(move |b| (a, b)))
            .collect::<Vec<_>>()
    };
    let mut edges = match (app.rule, ci, cj) {
        (Rule::R1, PExpr::Prior(ns), _) => pairs(&ns[..1], std::slice::from_ref(cj)),
        (Rule::R2, PExpr::Prior(ns), _) => pairs(std::slice::from_ref(cj), &ns[ns.len() - 1..]),
        (Rule::R3, _, _) => pairs(std::slice::from_ref(ci), std::slice::from_ref(cj)),
        (Rule::R4 { s, t }, PExpr::Prior(ns), PExpr::Prior(ms)) => {
            let mut e = pairs(&ns[..s], &ms[t..]);
            e.extend(pairs(&ms[..t], &ns[s..]));
            e
        }
        _ => unreachable!("shape checked by rewrite"),
    };
    edges.sort_unstable();
    Ok(edges)
}

/// Every admissible rule application on `tree`, in a fixed order: Pareto
/// nodes in pre-order, then ordered child pairs, then rules 1 to 4.
pub fn applications(tree: &SyntaxTree) -> Vec<RuleApplication> {
    fn go(e: &PExpr, path: &mut Vec<usize>, out: &mut Vec<RuleApplication>) {
        if let PExpr::Pareto(children) = e {
            for (i, ci) in children.iter().enumerate() {
                for (j, cj) in children.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    let mut push = |rule| {
                        out.push(RuleApplication {
                            rule,
                            path: path.clone(),
                            i,
                            j,
                        })
                    };
                    match (ci, cj) {
                        (PExpr::Leaf(_), PExpr::Leaf(_)) => push(Rule::R3),
                        (PExpr::Prior(ns), other) => {
                            push(Rule::R1);
                            push(Rule::R2);
                            if let PExpr::Prior(ms) = other {
                                for s in 1..ns.len() {
                                    for t in 1..ms.len() {
                                        push(Rule::R4 { s, t });
                                    }
                                }
                            }
                        }
                        _ => {}
                    }
                }
            }
        }
        for (k, c) in e.children().iter().enumerate() {
            path.push(k);
            go(c, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(tree.expr(), &mut Vec::new(), &mut out);
    out
}

/// One minimal extension together with a rule application producing it.
#[derive(Debug, Clone)]
pub struct Extension {
    pub application: RuleApplication,
    pub tree: SyntaxTree,
    pub graph: PGraph,
    pub added: Vec<(usize, usize)>,
}

/// All minimal p-extensions of the full relation `tree` over `n` attributes,
/// one per distinct p-graph.
pub fn minimal_extensions(tree: &SyntaxTree, n: usize) -> Vec<Extension> {
    let base = PGraph::from_tree(tree, n);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for app in applications(tree) {
        let t = apply_rule(tree, &app).expect("enumerated applications are admissible");
        let g = PGraph::from_tree(&t, n);
        if seen.insert(g.clone()) {
            out.push(Extension {
                added: base.added_edges(&g),
                application: app,
                tree: t,
                graph: g,
            });
        }
    }
    out
}

/// Upper bound on the length of a strictly increasing chain of p-skyline
/// relations over `n` attributes, used as an iteration cap.
pub fn extension_chain_bound(n: usize) -> usize {
    n * n.saturating_sub(1) + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Schema;
    use crate::pexpr::parse;

    fn tree(text: &str, s: &Schema) -> SyntaxTree {
        parse(text, s).unwrap().normalize()
    }

    #[test]
    fn rule3_on_skyline() {
        let s = Schema::uniform(3).unwrap();
        let t = tree("A1 * A2 * A3", &s);
        let app = RuleApplication {
            rule: Rule::R3,
            path: vec![],
            i: 0,
            j: 1,
        };
        let out = apply_rule(&t, &app).unwrap();
        assert_eq!(out.display(&s).to_string(), "(A1 & A2) * A3");
        assert_eq!(predicted_edges(&t, &app).unwrap(), vec![(0, 1)]);
    }

    #[test]
    fn rule1_on_prioritized_child() {
        let s = Schema::from_json(
            r#"{"attributes":[{"name":"make","kind":"categorical","ranked":["bmw","ford","kia"]},
            {"name":"price","kind":"numeric","preference":"lower"},
            {"name":"year","kind":"numeric","preference":"higher"}]}"#,
        )
        .unwrap();
        let t = tree("(price & make) * year", &s);
        let app = RuleApplication {
            rule: Rule::R1,
            path: vec![],
            i: 0,
            j: 1,
        };
        let out = apply_rule(&t, &app).unwrap();
        assert_eq!(out.display(&s).to_string(), "price & (year * make)");
        let before = PGraph::from_tree(&t, 3);
        let after = PGraph::from_tree(&out, 3);
        assert_eq!(before.added_edges(&after), vec![(1, 2)]);
    }

    #[test]
    fn rejects_bad_shapes() {
        let s = Schema::uniform(3).unwrap();
        let t = tree("(A1 & A2) * A3", &s);
        let app = |rule, path: Vec<usize>, i, j| RuleApplication { rule, path, i, j };
        assert!(matches!(apply_rule(&t, &app(Rule::R3, vec![], 0, 1)), Err(Error::RuleShape(_))));
        assert!(matches!(apply_rule(&t, &app(Rule::R1, vec![], 1, 0)), Err(Error::RuleShape(_))));
        assert!(matches!(apply_rule(&t, &app(Rule::R1, vec![0], 0, 1)), Err(Error::RuleShape(_))));
        assert!(matches!(apply_rule(&t, &app(Rule::R1, vec![], 0, 0)), Err(Error::RuleShape(_))));
    }

    #[test]
    fn two_attribute_skyline_has_two_extensions() {
        let s = Schema::uniform(2).unwrap();
        let exts = minimal_extensions(&tree("A1 * A2", &s), 2);
        let shown: Vec<String> = exts.iter().map(|e| e.tree.display(&s).to_string()).collect();
        assert_eq!(shown, vec!["A1 & A2", "A2 & A1"]);
        assert!(minimal_extensions(&tree("A1 & A2", &s), 2).is_empty());
    }

    #[test]
    fn chain_bound() {
        assert_eq!(extension_chain_bound(3), 7);
        assert_eq!(extension_chain_bound(1), 1);
    }
}
