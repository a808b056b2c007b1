//! p-skyline preference relations.
//!
//! A p-skyline relation refines the skyline (Pareto) preference with
//! attribute importance: it is written as a p-expression combining
//! attribute preferences with prioritized (`&`) and Pareto (`*`)
//! accumulation, and is identified by its p-graph. This crate evaluates
//! winnow queries under such relations, enumerates their minimal
//! extensions, and elicits a maximal relation under which a set of
//! user-chosen superior tuples stays undominated.
//!
//! ```
//! use std::sync::Arc;
//! use pskyline::{Dataset, PSkylineRelation, Schema};
//!
//! let schema = Arc::new(Schema::from_json(r#"{"attributes":[
//!     {"name":"make","kind":"categorical","ranked":["bmw","ford","kia"]},
//!     {"name":"price","kind":"numeric","preference":"lower"},
//!     {"name":"year","kind":"numeric","preference":"higher"}]}"#)?);
//! let cars = Dataset::from_csv(schema.clone(), "make,price,year
//! ford,30000,2007
//! bmw,45000,2008
//! kia,20000,2007
//! ford,40000,2008
//! bmw,50000,2006
//! ")?;
//! let rel = PSkylineRelation::parse("year & (price * make)", &schema)?;
//! assert_eq!(pskyline::winnow(&rel, &cars)?.ids(), ["t2", "t4"]);
//! # Ok::<(), pskyline::Error>(())
//! ```

pub mod attrset;
pub mod constraints;
pub mod dominance;
pub mod elicitation;
pub mod error;
pub mod extension;
pub mod harness;
pub mod model;
pub mod pexpr;
pub mod pgraph;

pub use attrset::AttrSet;
pub use dominance::{
    bet_in, diff, dominates, dominates_decomposition, dominates_semantic, skyline, top, winnow,
    PSkylineRelation,
};
pub use constraints::{
    build_negative, build_positive, reduce_via_skyline, satisfies, NegConstraint, NegSystem,
    PosConstraint, Satisfiable,
};
pub use elicitation::{
    brute_force_df, brute_force_opt_fdf, elicit, enumerate_all_pskylines, enumerate_pgraphs,
    exists_favoring, push, ElicitConfig, Elicitation,
};
pub use error::{Error, Result};
pub use extension::{
    apply_rule, extension_chain_bound, minimal_extensions, Extension, Rule, RuleApplication,
};
pub use harness::{
    generate, random_hidden_relation, run_accuracy_experiment, DataKind, ExperimentReport, GSize,
};
pub use model::{
    compare_values, AttributeKind, AttributeSpec, Comparison, Dataset, Direction, Schema, Tuple,
    Value,
};
pub use pexpr::{parse, skyline_expr, PExpr, SyntaxTree};
pub use pgraph::{contains, equals, general_envelope_holds, validate, Digraph, PGraph, Violation};
