//! Constraint systems over attribute sets.
//!
//! A negative constraint `(L, R)` says `children(L) ⊉ R`: a tuple better on
//! exactly `L` and worse on exactly `R` than some superior example must not
//! dominate it. A positive constraint is a disjunction of `children(L) ⊇ R`
//! terms: an inferior example must be dominated by at least one superior one.

use std::collections::HashMap;

use serde_json::{json, Value as Json};

use crate::attrset::AttrSet;
use crate::dominance::{bet_in, pareto_dominator, skyline_positions};
use crate::error::{Error, Result};
use crate::model::{Dataset, Schema};
use crate::pgraph::PGraph;

/// Something a p-graph can satisfy.
pub trait Satisfiable {
    fn satisfied_by(&self, g: &PGraph) -> bool;
}

pub fn satisfies<S: Satisfiable + ?Sized>(g: &PGraph, s: &S) -> bool {
    s.satisfied_by(g)
}

/// `children(lhs) ⊉ rhs`, with the tuple pairs it was derived from as
/// `(dominator, superior)` ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegConstraint {
    pub lhs: AttrSet,
    pub rhs: AttrSet,
    pub provenance: Vec<(String, String)>,
}

impl NegConstraint {
    pub fn new(lhs: AttrSet, rhs: AttrSet) -> NegConstraint {
        NegConstraint {
            lhs,
            rhs,
            provenance: Vec::new(),
        }
    }

    /// `self` implies `other`, and they differ.
    pub fn dominates(&self, other: &NegConstraint) -> bool {
        other.lhs.is_subset(self.lhs)
            && self.rhs.is_subset(other.rhs)
            && (self.lhs, self.rhs) != (other.lhs, other.rhs)
    }
}

impl Satisfiable for NegConstraint {
    #[inline]
    fn satisfied_by(&self, g: &PGraph) -> bool {
        !g.children(self.lhs).is_superset(self.rhs)
    }
}

/// A conjunction of negative constraints over `width` attributes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NegSystem {
    width: usize,
    constraints: Vec<NegConstraint>,
}

impl Satisfiable for NegSystem {
    fn satisfied_by(&self, g: &PGraph) -> bool {
        self.constraints.iter().all(|c| c.satisfied_by(g))
    }
}

impl NegSystem {
    pub fn new(width: usize, constraints: Vec<NegConstraint>) -> NegSystem {
        NegSystem { width, constraints }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn constraints(&self) -> &[NegConstraint] {
        &self.constraints
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    /// Constraints violated by `g`.
    pub fn violations<'a>(&'a self, g: &'a PGraph) -> impl Iterator<Item = &'a NegConstraint> + 'a {
        self.constraints.iter().filter(move |c| !c.satisfied_by(g))
    }

    /// Merges constraints with equal sides, keeping first-occurrence order and
    /// concatenating provenance.
    pub fn dedup(&self) -> NegSystem {
        let mut index: HashMap<(AttrSet, AttrSet), usize> = HashMap::new();
        let mut out: Vec<NegConstraint> = Vec::new();
        for c in &self.constraints {
            match index.get(&(c.lhs, c.rhs)) {
                Some(&k) => out[k].provenance.extend(c.provenance.iter().cloned()),
                None => {
                    index.insert((c.lhs, c.rhs), out.len());
                    out.push(c.clone());
                }
            }
        }
        NegSystem::new(self.width, out)
    }

    /// Removes constraints implied by a single other constraint.
    pub fn remove_redundant(&self) -> NegSystem {
        let unique = self.dedup();
        let cs = &unique.constraints;
        let keep: Vec<NegConstraint> = cs
            .iter()
            .filter(|c| !cs.iter().any(|d| d.dominates(c)))
            .cloned()
            .collect();
        NegSystem::new(self.width, keep)
    }

    /// Drops from each right-hand side the attributes already below its
    /// left-hand side in `g`. Every p-extension of `g` satisfies the result
    /// iff it satisfies `self`.
    pub fn minimize_wrt(&self, g: &PGraph) -> Result<NegSystem> {
        if let Some(c) = self.violations(g).next() {
            return Err(Error::Precondition(format!(
                "graph violates constraint ({:?}, {:?})",
                c.lhs, c.rhs
            )));
        }
        let constraints = self
            .constraints
            .iter()
            .map(|c| NegConstraint {
                rhs: c.rhs - g.children(c.lhs),
                ..c.clone()
            })
            .collect();
        Ok(NegSystem::new(self.width, constraints))
    }

    /// Incremental minimization after adding edges `U × D`.
    pub fn minimize(&mut self, u: AttrSet, d: AttrSet) {
        for c in &mut self.constraints {
            if u.intersects(c.lhs) {
                c.rhs -= d;
            }
        }
    }

    /// Whether a minimal extension adding edges `P_A × {a}` and `{a} × C_A`
    /// keeps the system satisfied. `self` must be minimal with respect to the
    /// relation being extended.
    pub fn check_new_edges(&self, a: usize, parents: AttrSet, children: AttrSet) -> bool {
        let only_a = AttrSet::singleton(a);
        !self.constraints.iter().any(|c| {
            (c.rhs == only_a && parents.intersects(c.lhs))
                || (c.lhs.contains(a) && c.rhs.is_subset(children))
        })
    }

    /// `[{"lhs":[..],"rhs":[..],"why":[dominator, superior]}]`; merged
    /// constraints list every source pair under `"sources"`.
    pub fn to_json(&self, schema: &Schema) -> Json {
        Json::Array(
            self.constraints
                .iter()
                .map(|c| {
                    let mut v = json!({
                        "lhs": schema.names_of(c.lhs),
                        "rhs": schema.names_of(c.rhs),
                    });
                    if let Some((d, s)) = c.provenance.first() {
                        v["why"] = json!([d, s]);
                    }
                    if c.provenance.len() > 1 {
                        v["sources"] = json!(c.provenance);
                    }
                    v
                })
                .collect(),
        )
    }
}

/// The negative constraints requiring every tuple of `superior` to survive
/// winnow over `pool`: one per (pool tuple, superior tuple) pair with
/// different values.
pub fn build_negative<S: AsRef<str>>(superior: &[S], pool: &Dataset) -> Result<NegSystem> {
    let g = pool.positions(superior)?;
    Ok(negative_from_positions(&g, pool))
}

pub(crate) fn negative_from_positions(g: &[usize], pool: &Dataset) -> NegSystem {
    let tuples = pool.tuples();
    let mut out = Vec::with_capacity(tuples.len() * g.len());
    for o in tuples {
        for &gi in g {
            let sup = &tuples[gi];
            if o.id() == sup.id() {
                continue;
            }
            let (lhs, rhs) = (bet_in(o, sup), bet_in(sup, o));
            if lhs.is_empty() && rhs.is_empty() {
                continue;
            }
            out.push(NegConstraint {
                lhs,
                rhs,
                provenance: vec![(o.id().to_string(), sup.id().to_string())],
            });
        }
    }
    NegSystem::new(pool.schema().len(), out)
}

/// The negative system built over the skyline of `pool` only; equivalent to
/// `build_negative` over the whole pool. Fails with a dominating witness when
/// some superior tuple is outside the skyline.
pub fn reduce_via_skyline<S: AsRef<str>>(superior: &[S], pool: &Dataset) -> Result<NegSystem> {
    let g = pool.positions(superior)?;
    check_in_skyline(&g, pool)?;
    let sky = pool.subset(&skyline_positions(pool.tuples()));
    let ids: Vec<&str> = g.iter().map(|&i| pool.tuples()[i].id()).collect();
    build_negative(&ids, &sky)
}

/// `NotFavorable` naming a Pareto dominator of the first superior tuple
/// outside the skyline of `pool`.
pub(crate) fn check_in_skyline(g: &[usize], pool: &Dataset) -> Result<()> {
    for &i in g {
        let t = &pool.tuples()[i];
        if let Some(d) = pareto_dominator(pool.tuples(), t) {
            return Err(Error::NotFavorable {
                dominator: d.id().to_string(),
                superior: t.id().to_string(),
            });
        }
    }
    Ok(())
}

/// A disjunction of `children(lhs) ⊇ rhs` terms for one inferior tuple. An
/// empty disjunction is unsatisfiable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosConstraint {
    pub inferior: String,
    pub disjuncts: Vec<(AttrSet, AttrSet)>,
}

impl Satisfiable for PosConstraint {
    fn satisfied_by(&self, g: &PGraph) -> bool {
        self.disjuncts
            .iter()
            .any(|&(l, r)| g.children(l).is_superset(r))
    }
}

impl Satisfiable for [PosConstraint] {
    fn satisfied_by(&self, g: &PGraph) -> bool {
        self.iter().all(|c| c.satisfied_by(g))
    }
}

impl Satisfiable for Vec<PosConstraint> {
    fn satisfied_by(&self, g: &PGraph) -> bool {
        self.as_slice().satisfied_by(g)
    }
}

impl PosConstraint {
    pub fn is_unsatisfiable(&self) -> bool {
        self.disjuncts.is_empty()
    }

    /// Drops every disjunct that implies a different, weaker disjunct.
    pub fn simplified(&self) -> PosConstraint {
        let implies = |(l1, r1): (AttrSet, AttrSet), (l2, r2): (AttrSet, AttrSet)| {
            l1.is_subset(l2) && r2.is_subset(r1)
        };
        let mut unique: Vec<(AttrSet, AttrSet)> = Vec::new();
        for &d in &self.disjuncts {
            if !unique.contains(&d) {
                unique.push(d);
            }
        }
        let kept = unique
            .iter()
            .copied()
            .filter(|&d| !unique.iter().any(|&e| e != d && implies(d, e)))
            .collect();
        PosConstraint {
            inferior: self.inferior.clone(),
            disjuncts: kept,
        }
    }

    pub fn to_json(&self, schema: &Schema) -> Json {
        json!({
            "inferior": self.inferior,
            "any_of": self.disjuncts.iter().map(|&(l, r)| json!({
                "lhs": schema.names_of(l),
                "rhs": schema.names_of(r),
            })).collect::<Vec<_>>(),
        })
    }
}

/// One positive constraint per inferior tuple: some superior tuple must
/// dominate it.
pub fn build_positive<S: AsRef<str>, T: AsRef<str>>(
    inferior: &[S],
    superior: &[T],
    pool: &Dataset,
) -> Result<Vec<PosConstraint>> {
    let w = pool.positions(inferior)?;
    let g = pool.positions(superior)?;
    if let Some(&i) = w.iter().find(|i| g.contains(i)) {
        return Err(Error::Precondition(format!(
            "`{}` is both superior and inferior",
            pool.tuples()[i].id()
        )));
    }
    let tuples = pool.tuples();
    Ok(w.iter()
        .map(|&wi| {
            let inf = &tuples[wi];
            PosConstraint {
                inferior: inf.id().to_string(),
                disjuncts: g
                    .iter()
                    .map(|&gi| (bet_in(&tuples[gi], inf), bet_in(inf, &tuples[gi])))
                    .filter(|(l, r)| !(l.is_empty() && r.is_empty()))
                    .collect(),
            }
        })
        .collect())
}
