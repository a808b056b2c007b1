//! Synthetic data, random relations and accuracy experiments.
//!
//! An experiment hides a random p-skyline relation, shows a sample of its
//! winnow to the elicitation algorithm as superior examples, and scores the
//! elicited relation's winnow against the hidden one.

use std::sync::Arc;
use std::time::Instant;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use crate::dominance::{skyline_positions, winnow_positions, PSkylineRelation};
use crate::elicitation::{elicit, ElicitConfig};
use crate::error::{Error, Result};
use crate::model::{AttributeSpec, Dataset, Direction, Schema, Tuple, Value, MAX_ATTRIBUTES};
use crate::pexpr::{Op, PExpr};

/// Fixed-point decimals used by generated attributes.
pub const GENERATED_SCALE: u32 = 4;
const UNIT: f64 = 10_000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DataKind {
    Correlated,
    Anticorrelated,
    Uniform,
}

impl std::str::FromStr for DataKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "correlated" => Ok(DataKind::Correlated),
            "anticorrelated" | "anti-correlated" => Ok(DataKind::Anticorrelated),
            "uniform" => Ok(DataKind::Uniform),
            other => Err(Error::Precondition(format!("unknown data kind `{other}`"))),
        }
    }
}

/// Schema of generated data: `a1..ad`, numeric, higher is better.
pub fn generated_schema(dims: usize) -> Result<Schema> {
    let attrs = (1..=dims)
        .map(|i| AttributeSpec::numeric(format!("a{i}"), Direction::Higher).with_scale(GENERATED_SCALE))
        .collect();
    Schema::new(attrs)
}

/// `n` rows over `dims` attributes in `[0, 1]`, deterministic per seed.
///
/// Anti-correlated rows scatter around a hyperplane whose per-row level is
/// drawn close to the middle, so being good on one attribute costs on others.
/// Correlated rows share a latent quality plus small noise. Uniform rows are
/// independent draws.
pub fn generate(kind: DataKind, n: usize, dims: usize, seed: u64) -> Result<Dataset> {
    if dims > MAX_ATTRIBUTES {
        return Err(Error::TooManyAttributes(dims));
    }
    let schema = Arc::new(generated_schema(dims)?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let level = Normal::new(0.5, 0.05).expect("valid normal");
    let latent = Normal::new(0.5, 0.15).expect("valid normal");
    let noise = Normal::new(0.0, 0.05).expect("valid normal");
    let mut tuples = Vec::with_capacity(n);
    for row in 0..n {
        let xs: Vec<f64> = match kind {
            DataKind::Uniform => (0..dims).map(|_| rng.random::<f64>()).collect(),
            DataKind::Correlated => {
                let q: f64 = latent.sample(&mut rng);
                (0..dims).map(|_| q + noise.sample(&mut rng)).collect()
            }
            DataKind::Anticorrelated => {
                let v: f64 = level.sample(&mut rng);
                let mut xs = Vec::new();
                for _ in 0..100 {
                    xs = (0..dims).map(|_| rng.random::<f64>()).collect();
                    let shift = v - xs.iter().sum::<f64>() / dims as f64;
                    xs.iter_mut().for_each(|x| *x += shift);
                    if xs.iter().all(|x| (0.0..=1.0).contains(x)) {
                        break;
                    }
                }
                xs
            }
        };
        let values = xs
            .into_iter()
            .map(|x| Value::Num((x.clamp(0.0, 1.0) * UNIT).round() as i64))
            .collect();
        tuples.push(Tuple::new(&schema, format!("t{}", row + 1), values)?);
    }
    Dataset::new(schema, tuples)
}

/// A random full relation over `n` attributes: recursively split a shuffled
/// attribute list into 2 to 4 blocks, combined by prioritized or Pareto
/// accumulation with equal probability.
pub fn random_relation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> PSkylineRelation {
    fn go<R: Rng + ?Sized>(attrs: &mut [usize], rng: &mut R) -> PExpr {
        if attrs.len() == 1 {
            return PExpr::Leaf(attrs[0]);
        }
        attrs.shuffle(rng);
        let k = rng.random_range(2..=attrs.len().min(4));
        let mut cuts: Vec<usize> = index::sample(rng, attrs.len() - 1, k - 1)
            .into_iter()
            .map(|c| c + 1)
            .collect();
        cuts.sort_unstable();
        let op = if rng.random_bool(0.5) { Op::Prior } else { Op::Pareto };
        let mut blocks = Vec::with_capacity(k);
        let mut start = 0;
        for end in cuts.into_iter().chain([attrs.len()]) {
            blocks.push(go(&mut attrs[start..end], rng));
            start = end;
        }
        PExpr::node(op, blocks)
    }
    let mut attrs: Vec<usize> = (0..n).collect();
    let e = go(&mut attrs, rng);
    PSkylineRelation::new(&e, n).expect("generated expressions are full")
}

pub fn random_hidden_relation(n: usize, seed: u64) -> PSkylineRelation {
    random_relation(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Metrics {
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
}

/// Precision and recall of `found` against `hidden`, both sets of positions.
pub fn metrics(found: &[usize], hidden: &[usize]) -> Metrics {
    let common = found.iter().filter(|i| hidden.contains(i)).count() as f64;
    let ratio = |a: f64, b: usize| if b == 0 { 0.0 } else { a / b as f64 };
    let precision = ratio(common, found.len());
    let recall = ratio(common, hidden.len());
    let f_measure = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    Metrics {
        precision,
        recall,
        f_measure,
    }
}

/// How many superior examples to reveal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum GSize {
    Count(usize),
    /// `⌈fraction · |hidden winnow|⌉`.
    Fraction(f64),
}

impl GSize {
    fn resolve(self, hidden: usize) -> usize {
        match self {
            GSize::Count(k) => k,
            GSize::Fraction(f) => (f * hidden as f64).ceil() as usize,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub g_size: GSize,
    /// Superior examples actually used, after clamping to the hidden winnow.
    pub superior: usize,
    pub hidden_winnow: usize,
    pub trials: usize,
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    /// Mean `|elicited winnow| / |skyline|`.
    pub winnow_size_ratio: f64,
    pub elicit_ms: f64,
    pub note: Option<String>,
}

/// Three attribute orders: schema order, its reverse, and a seeded shuffle.
pub fn attribute_orders<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Vec<usize>> {
    let forward: Vec<usize> = (0..n).collect();
    let reverse: Vec<usize> = (0..n).rev().collect();
    let mut shuffled = forward.clone();
    shuffled.shuffle(rng);
    vec![forward, reverse, shuffled]
}

/// Elicits under each order and keeps the relation with the smallest winnow,
/// breaking ties by the lexicographically smallest p-graph edge list.
pub fn best_of_orders<S: AsRef<str>>(
    superior: &[S],
    pool: &Dataset,
    orders: &[Vec<usize>],
) -> Result<(PSkylineRelation, Vec<usize>)> {
    type Candidate = (usize, Vec<(usize, usize)>, PSkylineRelation, Vec<usize>);
    let mut best: Option<Candidate> = None;
    for order in orders {
        let config = ElicitConfig::with_order(order.clone()).reduced();
        let rel = elicit(superior, pool, &config)?.relation;
        let w = winnow_positions(rel.graph(), pool.tuples());
        let key = (w.len(), rel.graph().edges());
        if best.as_ref().is_none_or(|(n, e, _, _)| key < (*n, e.clone())) {
            best = Some((key.0, key.1, rel, w));
        }
    }
    let (_, _, rel, w) = best.ok_or_else(|| Error::Precondition("no attribute orders given".into()))?;
    Ok((rel, w))
}

/// Runs `trials` elicitations per requested superior-set size against the
/// winnow of `hidden` over `pool` and averages the scores.
pub fn run_accuracy_experiment(
    pool: &Dataset,
    hidden: &PSkylineRelation,
    g_sizes: &[GSize],
    trials: usize,
    seed: u64,
) -> Result<Vec<ExperimentReport>> {
    let n = pool.schema().len();
    if hidden.width() != n {
        return Err(Error::SchemaMismatch {
            left: hidden.width(),
            right: n,
        });
    }
    let omega = winnow_positions(hidden.graph(), pool.tuples());
    let sky = skyline_positions(pool.tuples()).len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports = Vec::with_capacity(g_sizes.len());
    for &size in g_sizes {
        let wanted = size.resolve(omega.len());
        let k = wanted.min(omega.len());
        let mut note = (k < wanted).then(|| {
            format!("requested {wanted} superior examples, hidden winnow has {}", omega.len())
        });
        if k == 0 || trials == 0 {
            note = Some("no superior examples to reveal; skipped".into());
            reports.push(ExperimentReport {
                g_size: size,
                superior: 0,
                hidden_winnow: omega.len(),
                trials: 0,
                precision: 0.0,
                recall: 0.0,
                f_measure: 0.0,
                winnow_size_ratio: 0.0,
                elicit_ms: 0.0,
                note,
            });
            continue;
        }
        let (mut p, mut r, mut f, mut ratio, mut ms) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for _ in 0..trials {
            let g: Vec<&str> = index::sample(&mut rng, omega.len(), k)
                .into_iter()
                .map(|i| pool.tuples()[omega[i]].id())
                .collect();
            let orders = attribute_orders(n, &mut rng);
            let start = Instant::now();
            let (_, found) = best_of_orders(&g, pool, &orders)?;
            ms += start.elapsed().as_secs_f64() * 1e3;
            let m = metrics(&found, &omega);
            p += m.precision;
            r += m.recall;
            f += m.f_measure;
            ratio += found.len() as f64 / sky.max(1) as f64;
        }
        let t = trials as f64;
        reports.push(ExperimentReport {
            g_size: size,
            superior: k,
            hidden_winnow: omega.len(),
            trials,
            precision: p / t,
            recall: r / t,
            f_measure: f / t,
            winnow_size_ratio: ratio / t,
            elicit_ms: ms / t,
            note,
        });
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        for kind in [DataKind::Uniform, DataKind::Correlated, DataKind::Anticorrelated] {
            let a = generate(kind, 50, 4, 9).unwrap();
            let b = generate(kind, 50, 4, 9).unwrap();
            assert_eq!(a.to_csv(), b.to_csv());
        }
        assert!(generate(DataKind::Uniform, 0, 3, 1).unwrap().is_empty());
    }

    #[test]
    fn anticorrelated_rows_sum_near_constant() {
        let d = generate(DataKind::Anticorrelated, 200, 5, 3).unwrap();
        for t in d.tuples() {
            let mean = t.scores().iter().sum::<i64>() as f64 / 5.0 / UNIT;
            assert!((mean - 0.5).abs() < 0.3, "{mean}");
        }
    }

    #[test]
    fn metric_formulas() {
        let m = metrics(&[1, 2, 3, 4], &[3, 4, 5]);
        assert_eq!(m.precision, 0.5);
        assert!((m.recall - 2.0 / 3.0).abs() < 1e-12);
        assert!((m.f_measure - 4.0 / 7.0).abs() < 1e-12);
        assert_eq!(metrics(&[1], &[2]).f_measure, 0.0);
    }

    #[test]
    fn random_relations_are_full_and_stable() {
        for seed in 0..50 {
            let r = random_hidden_relation(6, seed);
            assert_eq!(r.tree().vars().len(), 6);
            assert_eq!(r.tree().expr().normalize(), *r.tree());
            assert_eq!(r, random_hidden_relation(6, seed));
        }
    }
}
