//! Command implementations behind the `pskyline` binary. Each command returns
//! an [`Output`] holding both a human-readable and a JSON rendering.

use std::fmt::Write as _;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pskyline::dominance::pareto_dominator;
use pskyline::elicitation::{winnow_ids, BRUTE_FORCE_LIMIT};
use pskyline::{
    brute_force_df, brute_force_opt_fdf, build_negative, elicit, generate, minimal_extensions, parse,
    random_hidden_relation, reduce_via_skyline, run_accuracy_experiment, skyline, validate, winnow,
    DataKind, Dataset, ElicitConfig, ExperimentReport, GSize, PGraph, PSkylineRelation, Schema,
};
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(name = "pskyline", version, about = "p-skyline preference queries and elicitation")]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Schema JSON file.
    #[arg(long)]
    pub schema: PathBuf,
    /// CSV file; an `id` column is optional.
    #[arg(long)]
    pub data: PathBuf,
}

#[derive(Debug, Args)]
pub struct SchemaArgs {
    /// Schema JSON file.
    #[arg(long, conflicts_with = "attrs")]
    pub schema: Option<PathBuf>,
    /// Comma-separated attribute names, all numeric and higher-is-better.
    #[arg(long)]
    pub attrs: Option<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GraphFormat {
    Dot,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Skyline (Pareto-optimal tuples) of a dataset.
    Skyline(DataArgs),
    /// Winnow of a dataset under a p-expression.
    Winnow {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        pexpr: String,
    },
    /// Whether one tuple dominates another under a p-expression.
    Dominates {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        pexpr: String,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Parses a p-expression, or checks a p-graph JSON file.
    ValidatePexpr {
        #[command(flatten)]
        schema: SchemaArgs,
        #[arg(long, required_unless_present = "graph")]
        pexpr: Option<String>,
        /// p-graph JSON file (`{"nodes": [..], "edges": [[a, b], ..]}`).
        #[arg(long, conflicts_with = "pexpr")]
        graph: Option<PathBuf>,
    },
    /// p-graph of a p-expression.
    Pgraph {
        #[command(flatten)]
        schema: SchemaArgs,
        #[arg(long)]
        pexpr: String,
        #[arg(long, value_enum, default_value = "dot")]
        format: GraphFormat,
    },
    /// Minimal extensions of a p-expression.
    Extend {
        #[command(flatten)]
        schema: SchemaArgs,
        #[arg(long)]
        pexpr: String,
        /// List every extension with the rule that produced it.
        #[arg(long)]
        list: bool,
    },
    /// Negative constraints induced by superior examples.
    Constraints {
        #[command(flatten)]
        data: DataArgs,
        /// Comma-separated tuple ids.
        #[arg(long, value_delimiter = ',')]
        superior: Vec<String>,
        /// Restrict to the skyline and drop redundant constraints.
        #[arg(long)]
        reduce: bool,
    },
    /// Maximal relation keeping every superior example in the winnow.
    Elicit {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_delimiter = ',')]
        superior: Vec<String>,
        /// Attribute admission order, comma-separated names.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<String>>,
        /// Restrict to the skyline and drop redundant constraints first.
        #[arg(long)]
        reduce: bool,
    },
    /// Exhaustive search with superior and inferior examples (at most 5 attributes).
    SolveDf {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_delimiter = ',')]
        superior: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        inferior: Vec<String>,
        /// Return a maximal relation instead of the first one found.
        #[arg(long)]
        maximal: bool,
    },
    /// Generates a synthetic dataset as CSV.
    Gen {
        #[arg(long, default_value = "uniform")]
        kind: DataKind,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        dims: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the schema JSON here.
        #[arg(long)]
        schema_out: Option<PathBuf>,
    },
    /// Accuracy of elicitation against random hidden relations.
    BenchAccuracy {
        #[arg(long, default_value = "uniform")]
        kind: DataKind,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        dims: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of hidden relations.
        #[arg(long, default_value_t = 20)]
        hidden: u64,
        /// Superior-set samples per hidden relation and size.
        #[arg(long, default_value_t = 1)]
        trials: usize,
        /// Superior-set sizes as fractions of the hidden winnow.
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.3,0.5,0.7,0.9")]
        fractions: Vec<f64>,
    },
    /// Runs the HTTP service.
    Serve {
        #[arg(long, env = "PORT", default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Allowed CORS origin; any origin when omitted.
        #[arg(long)]
        origin: Option<String>,
    },
}

/// A command result in both renderings.
#[derive(Debug, Clone)]
pub struct Output {
    pub text: String,
    pub json: Value,
}

impl Output {
    fn new(text: impl Into<String>, json: Value) -> Self {
        Output {
            text: text.into(),
            json,
        }
    }

    pub fn print(&self, json: bool) {
        if json {
            println!("{}", serde_json::to_string_pretty(&self.json).expect("serializable"));
        } else {
            print!("{}", self.text);
            if !self.text.ends_with('\n') {
                println!();
            }
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_schema(path: &Path) -> Result<Schema> {
    Schema::from_json(&read(path)?).with_context(|| format!("schema {}", path.display()))
}

impl DataArgs {
    pub fn load(&self) -> Result<Dataset> {
        let schema = Arc::new(load_schema(&self.schema)?);
        Dataset::from_csv(schema, &read(&self.data)?).with_context(|| format!("data {}", self.data.display()))
    }
}

impl SchemaArgs {
    pub fn load(&self) -> Result<Schema> {
        match (&self.schema, &self.attrs) {
            (Some(p), _) => load_schema(p),
            (None, Some(a)) => {
                let names: Vec<&str> = a.split(',').map(str::trim).collect();
                Ok(Schema::numeric(&names, pskyline::Direction::Higher)?)
            }
            (None, None) => bail!("either --schema or --attrs is required"),
        }
    }
}

fn ids_text(ids: &[impl AsRef<str>]) -> String {
    ids.iter().map(|s| s.as_ref()).collect::<Vec<_>>().join(" ")
}

fn relation_json(rel: &PSkylineRelation, schema: &Schema) -> Value {
    json!({
        "expression": rel.display(schema).to_string(),
        "tree": rel.tree().to_json(schema),
        "pgraph": rel.graph().to_json(schema),
    })
}

pub fn execute(cli: Cli) -> Result<Output> {
    match cli.command {
        Command::Skyline(data) => {
            let d = data.load()?;
            let ids: Vec<String> = skyline(&d).ids().into_iter().map(String::from).collect();
            Ok(Output::new(ids_text(&ids), json!(ids)))
        }
        Command::Winnow { data, pexpr } => {
            let d = data.load()?;
            let rel = PSkylineRelation::parse(&pexpr, d.schema())?;
            let ids: Vec<String> = winnow(&rel, &d)?.ids().into_iter().map(String::from).collect();
            Ok(Output::new(ids_text(&ids), json!(ids)))
        }
        Command::Dominates {
            data,
            pexpr,
            left,
            right,
        } => {
            let d = data.load()?;
            let rel = PSkylineRelation::parse(&pexpr, d.schema())?;
            let get = |id: &str| d.get(id).ok_or_else(|| anyhow!("unknown tuple id `{id}`"));
            let (l, r) = (get(&left)?, get(&right)?);
            let yes = rel.dominates(l, r);
            let top = d.schema().names_of(pskyline::top(rel.graph(), l, r));
            let text = format!("{left} {} {right}", if yes { "dominates" } else { "does not dominate" });
            Ok(Output::new(
                text,
                json!({ "left": left, "right": right, "dominates": yes, "top": top }),
            ))
        }
        Command::ValidatePexpr { schema, pexpr, graph } => {
            let s = schema.load()?;
            if let Some(path) = graph {
                let g = PGraph::from_json(&read(&path)?, &s);
                return Ok(match g {
                    Ok(g) => {
                        let expr = g.to_expr()?.display(&s).to_string();
                        Output::new(
                            format!("valid p-graph: {expr}"),
                            json!({ "valid": true, "expression": expr }),
                        )
                    }
                    Err(e) => {
                        let msg = match e {
                            pskyline::Error::InvalidGraph(v) => v.describe(&s),
                            other => other.to_string(),
                        };
                        Output::new(format!("invalid: {msg}"), json!({ "valid": false, "error": msg }))
                    }
                });
            }
            let text = pexpr.expect("clap requires --pexpr without --graph");
            match parse(&text, &s).and_then(|e| PSkylineRelation::new(&e, s.len())) {
                Ok(rel) => {
                    validate(&rel.graph().to_digraph()).map_err(|v| anyhow!("{}", v.describe(&s)))?;
                    let normalized = rel.display(&s).to_string();
                    Ok(Output::new(
                        format!("valid: {normalized}"),
                        json!({ "valid": true, "normalized": normalized, "edges": rel.graph().edge_count() }),
                    ))
                }
                Err(e) => Ok(Output::new(format!("invalid: {e}"), json!({ "valid": false, "error": e.to_string() }))),
            }
        }
        Command::Pgraph { schema, pexpr, format } => {
            let s = schema.load()?;
            let g = PGraph::from_expr(&parse(&pexpr, &s)?, s.len());
            let text = match format {
                GraphFormat::Dot => g.to_dot(&s),
                GraphFormat::Json => g.to_json(&s).to_string(),
            };
            Ok(Output::new(text, g.to_json(&s)))
        }
        Command::Extend { schema, pexpr, list } => {
            let s = schema.load()?;
            let rel = PSkylineRelation::parse(&pexpr, &s)?;
            let exts = minimal_extensions(rel.tree(), s.len());
            let mut text = format!("{} minimal extensions of {}\n", exts.len(), rel.display(&s));
            let mut items = Vec::new();
            for e in &exts {
                let added: Vec<[&str; 2]> = e.added.iter().map(|&(a, b)| [s.name(a), s.name(b)]).collect();
                let shown = e.tree.display(&s).to_string();
                if list {
                    let edges: Vec<String> = added.iter().map(|[a, b]| format!("{a}->{b}")).collect();
                    writeln!(text, "  {shown}  [{}; +{}]", e.application, edges.join(" ")).expect("string write");
                }
                items.push(json!({ "expression": shown, "rule": e.application.to_string(), "added": added }));
            }
            Ok(Output::new(text, json!({ "base": rel.display(&s).to_string(), "extensions": items })))
        }
        Command::Constraints { data, superior, reduce } => {
            let d = data.load()?;
            let sys = if reduce {
                reduce_via_skyline(&superior, &d)?.remove_redundant()
            } else {
                build_negative(&superior, &d)?
            };
            let s = d.schema();
            let mut text = String::new();
            for c in sys.constraints() {
                let why: Vec<String> = c.provenance.iter().map(|(a, b)| format!("{a} vs {b}")).collect();
                writeln!(
                    text,
                    "not all of {} above all of {}   ({})",
                    s.fmt_set(c.lhs),
                    s.fmt_set(c.rhs),
                    why.join(", ")
                )
                .expect("string write");
            }
            if sys.is_empty() {
                text.push_str("no constraints\n");
            }
            Ok(Output::new(text, sys.to_json(s)))
        }
        Command::Elicit {
            data,
            superior,
            order,
            reduce,
        } => {
            let d = data.load()?;
            let s = d.schema();
            let mut config = ElicitConfig::default();
            if let Some(names) = order {
                let idx = names
                    .iter()
                    .map(|n| s.index_of(n).ok_or_else(|| anyhow!("unknown attribute `{n}`")))
                    .collect::<Result<Vec<_>>>()?;
                config.order = Some(idx);
            }
            if reduce {
                config = config.reduced();
            }
            let e = match elicit(&superior, &d, &config) {
                Err(pskyline::Error::NotFavorable { dominator, superior }) => {
                    bail!("`{superior}` is outside the skyline: `{dominator}` dominates it under every p-skyline relation")
                }
                other => other?,
            };
            let w = winnow_ids(&e.relation, &d);
            let mut text = String::new();
            for st in &e.steps {
                writeln!(text, "{:<28} {}", st.tree.display(s).to_string(), st.application).expect("string write");
            }
            writeln!(text, "relation: {}", e.relation.display(s)).expect("string write");
            writeln!(text, "winnow: {}", ids_text(&w)).expect("string write");
            let mut out = relation_json(&e.relation, s);
            out["winnow"] = json!(w);
            out["steps"] = e
                .steps
                .iter()
                .map(|st| json!({ "attribute": s.name(st.attribute), "rule": st.application.to_string(), "expression": st.tree.display(s).to_string() }))
                .collect();
            Ok(Output::new(text, out))
        }
        Command::SolveDf {
            data,
            superior,
            inferior,
            maximal,
        } => {
            let d = data.load()?;
            for id in &superior {
                let t = d.get(id).ok_or_else(|| anyhow!("unknown tuple id `{id}`"))?;
                if let Some(dom) = pareto_dominator(d.tuples(), t) {
                    bail!("`{id}` is outside the skyline: `{}` dominates it", dom.id());
                }
            }
            let found = if maximal {
                brute_force_opt_fdf(&superior, &inferior, &d, BRUTE_FORCE_LIMIT)?
            } else {
                brute_force_df(&superior, &inferior, &d, BRUTE_FORCE_LIMIT)?
            };
            let s = d.schema();
            Ok(match found {
                Some(rel) => {
                    let w = winnow_ids(&rel, &d);
                    let mut out = relation_json(&rel, s);
                    out["winnow"] = json!(w);
                    out["found"] = json!(true);
                    Output::new(format!("relation: {}\nwinnow: {}", rel.display(s), ids_text(&w)), out)
                }
                None => Output::new("no p-skyline relation satisfies the examples", json!({ "found": false })),
            })
        }
        Command::Gen {
            kind,
            n,
            dims,
            seed,
            schema_out,
        } => {
            let d = generate(kind, n, dims, seed)?;
            if let Some(p) = schema_out {
                std::fs::write(&p, d.schema().to_json()).with_context(|| format!("writing {}", p.display()))?;
            }
            let csv = d.to_csv();
            let schema: Value = serde_json::from_str(&d.schema().to_json())?;
            Ok(Output::new(csv.clone(), json!({ "schema": schema, "csv": csv })))
        }
        Command::BenchAccuracy {
            kind,
            n,
            dims,
            seed,
            hidden,
            trials,
            fractions,
        } => bench_accuracy(kind, n, dims, seed, hidden, trials, &fractions),
        Command::Serve { port, host, origin } => {
            let addr: SocketAddr = format!("{host}:{port}").parse().context("listen address")?;
            let rt = tokio::runtime::Runtime::new()?;
            eprintln!("listening on http://{addr}");
            rt.block_on(pskyline_service::serve(addr, origin.as_deref()))?;
            Ok(Output::new("", Value::Null))
        }
    }
}

/// Averages experiment reports over `hidden` random hidden relations, each
/// run on its own thread.
pub fn bench_accuracy(
    kind: DataKind,
    n: usize,
    dims: usize,
    seed: u64,
    hidden: u64,
    trials: usize,
    fractions: &[f64],
) -> Result<Output> {
    if fractions.iter().any(|f| !(0.0..=1.0).contains(f)) {
        bail!("fractions must lie in [0, 1]");
    }
    let pool = generate(kind, n, dims, seed)?;
    let sizes: Vec<GSize> = fractions.iter().map(|&f| GSize::Fraction(f)).collect();
    let runs: Vec<Vec<ExperimentReport>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..hidden)
            .map(|h| {
                let (pool, sizes) = (&pool, &sizes);
                scope.spawn(move || {
                    let rel = random_hidden_relation(dims, seed.wrapping_add(h));
                    run_accuracy_experiment(pool, &rel, sizes, trials, seed.wrapping_add(1000 + h))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("experiment thread"))
            .collect::<pskyline::Result<Vec<_>>>()
    })?;

    let mut text = String::from("fraction,precision,recall,f_measure,winnow_size_ratio,elicit_ms\n");
    let mut rows = Vec::new();
    for (i, &f) in fractions.iter().enumerate() {
        let used: Vec<&ExperimentReport> = runs.iter().map(|r| &r[i]).filter(|r| r.trials > 0).collect();
        let k = used.len().max(1) as f64;
        let mean = |get: fn(&ExperimentReport) -> f64| used.iter().map(|r| get(r)).sum::<f64>() / k;
        let (p, r, fm, ratio, ms) = (
            mean(|r| r.precision),
            mean(|r| r.recall),
            mean(|r| r.f_measure),
            mean(|r| r.winnow_size_ratio),
            mean(|r| r.elicit_ms),
        );
        writeln!(text, "{f},{p:.4},{r:.4},{fm:.4},{ratio:.4},{ms:.3}").expect("string write");
        rows.push(json!({
            "fraction": f,
            "relations": used.len(),
            "precision": p,
            "recall": r,
            "f_measure": fm,
            "winnow_size_ratio": ratio,
            "elicit_ms": ms,
        }));
    }
    Ok(Output::new(
        text,
        json!({ "kind": kind, "n": n, "dims": dims, "seed": seed, "hidden": hidden, "trials": trials, "results": rows, "runs": runs }),
    ))
}
