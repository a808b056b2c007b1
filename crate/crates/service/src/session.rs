use std::collections::BTreeSet;
use std::sync::Arc;

use axum::http::StatusCode;
use pskyline::dominance::{pareto_dominator, skyline_positions, winnow_positions};
use pskyline::elicitation::BRUTE_FORCE_LIMIT;
use pskyline::{brute_force_opt_fdf, elicit, Dataset, ElicitConfig, PSkylineRelation, Schema};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::ApiError;

/// An uploaded dataset. Immutable once stored.
#[derive(Debug)]
pub struct StoredDataset {
    pub id: String,
    pub data: Dataset,
    pub skyline: Vec<String>,
}

impl StoredDataset {
    pub fn new(id: String, data: Dataset) -> Self {
        let skyline = skyline_positions(data.tuples())
            .into_iter()
            .map(|i| data.tuples()[i].id().to_string())
            .collect();
        StoredDataset { id, data, skyline }
    }

    pub fn to_json(&self) -> Value {
        let s = self.data.schema();
        let rows: Vec<Value> = self
            .data
            .tuples()
            .iter()
            .map(|t| {
                let values: Vec<String> = s
                    .attributes()
                    .iter()
                    .zip(t.values())
                    .map(|(a, v)| a.format_value(v))
                    .collect();
                json!({ "id": t.id(), "values": values })
            })
            .collect();
        json!({
            "id": self.id,
            "schema": serde_json::from_str::<Value>(&s.to_json()).unwrap_or(Value::Null),
            "rows": rows,
            "skyline": self.skyline,
        })
    }
}

/// One elicitation round as recorded in the session history.
#[derive(Debug, Clone, Serialize)]
pub struct Round {
    pub round: usize,
    pub added_superior: Vec<String>,
    pub added_inferior: Vec<String>,
    pub method: &'static str,
    pub expression: String,
    pub pgraph: Value,
    pub winnow: Vec<String>,
}

#[derive(Debug)]
pub struct Session {
    pub id: String,
    pub dataset: Arc<StoredDataset>,
    superior: Vec<String>,
    inferior: Vec<String>,
    pending_superior: Vec<String>,
    pending_inferior: Vec<String>,
    relation: PSkylineRelation,
    winnow: Vec<String>,
    explanation: Value,
    history: Vec<Round>,
}

impl Session {
    pub fn new(id: String, dataset: Arc<StoredDataset>) -> Self {
        let n = dataset.data.schema().len();
        let winnow = dataset.skyline.clone();
        Session {
            id,
            dataset,
            superior: Vec::new(),
            inferior: Vec::new(),
            pending_superior: Vec::new(),
            pending_inferior: Vec::new(),
            relation: PSkylineRelation::skyline(n),
            winnow,
            explanation: Value::Null,
            history: Vec::new(),
        }
    }

    pub fn history(&self) -> &[Round] {
        &self.history
    }

    pub fn relation(&self) -> &PSkylineRelation {
        &self.relation
    }

    /// Adds superior and inferior examples. Every superior example must be
    /// in the skyline; inferior examples need a schema narrow enough for
    /// exhaustive search.
    pub fn feedback(&mut self, add_superior: &[String], add_inferior: &[String]) -> Result<Value, ApiError> {
        let data = &self.dataset.data;
        for id in add_superior.iter().chain(add_inferior) {
            if data.position(id).is_none() {
                return Err(pskyline::Error::UnknownId(id.clone()).into());
            }
        }
        let superior: BTreeSet<&String> = self.superior.iter().chain(add_superior).collect();
        let inferior: BTreeSet<&String> = self.inferior.iter().chain(add_inferior).collect();
        if let Some(both) = superior.intersection(&inferior).next() {
            return Err(ApiError::bad_request(format!(
                "`{both}` cannot be both a superior and an inferior example"
            )));
        }
        for id in add_superior {
            let t = data.get(id).expect("checked above");
            if let Some(d) = pareto_dominator(data.tuples(), t) {
                return Err(pskyline::Error::NotFavorable {
                    dominator: d.id().to_string(),
                    superior: id.clone(),
                }
                .into());
            }
        }
        let width = data.schema().len();
        if !inferior.is_empty() && width > BRUTE_FORCE_LIMIT {
            return Err(pskyline::Error::TooWide {
                width,
                limit: BRUTE_FORCE_LIMIT,
            }
            .into());
        }
        for id in add_superior {
            if !self.superior.contains(id) {
                self.superior.push(id.clone());
                self.pending_superior.push(id.clone());
            }
        }
        for id in add_inferior {
            if !self.inferior.contains(id) {
                self.inferior.push(id.clone());
                self.pending_inferior.push(id.clone());
            }
        }
        Ok(self.snapshot())
    }

    /// Re-elicits from the full accumulated feedback and records a round.
    pub fn elicit(&mut self) -> Result<Value, ApiError> {
        let data = &self.dataset.data;
        let schema = data.schema();
        let (relation, method, steps, constraints) = if self.inferior.is_empty() {
            if self.superior.is_empty() {
                (PSkylineRelation::skyline(schema.len()), "skyline", json!([]), json!([]))
            } else {
                let e = elicit(&self.superior, data, &ElicitConfig::default())?;
                let steps: Vec<Value> = e
                    .steps
                    .iter()
                    .map(|s| {
                        json!({
                            "attribute": schema.name(s.attribute),
                            "rule": s.application.to_string(),
                            "added": named_edges(schema, &s.added),
                            "expression": s.tree.display(schema).to_string(),
                        })
                    })
                    .collect();
                let constraints = e.constraints.remove_redundant().to_json(schema);
                (e.relation, "greedy", Value::Array(steps), constraints)
            }
        } else {
            let found = brute_force_opt_fdf(&self.superior, &self.inferior, data, BRUTE_FORCE_LIMIT)?;
            let Some(rel) = found else {
                return Err(ApiError::new(
                    StatusCode::CONFLICT,
                    "no_separating_relation",
                    "no p-skyline relation keeps every superior example while excluding every inferior one",
                )
                .with_details(json!({ "superior": self.superior, "inferior": self.inferior })));
            };
            (rel, "exhaustive", json!([]), json!([]))
        };

        let kept = winnow_positions(relation.graph(), data.tuples());
        let winnow: Vec<String> = kept.iter().map(|&i| data.tuples()[i].id().to_string()).collect();
        if !winnow.iter().all(|id| self.dataset.skyline.contains(id)) {
            return Err(pskyline::Error::Internal("winnow escaped the skyline".into()).into());
        }
        let excluded: Vec<Value> = data
            .tuples()
            .iter()
            .enumerate()
            .filter(|(i, _)| !kept.contains(i))
            .map(|(_, t)| {
                let by = kept
                    .iter()
                    .map(|&k| &data.tuples()[k])
                    .find(|w| relation.dominates(w, t))
                    .map(|w| w.id());
                json!({ "id": t.id(), "dominator": by })
            })
            .collect();

        self.relation = relation;
        self.winnow = winnow;
        self.explanation = json!({
            "method": method,
            "steps": steps,
            "constraints": constraints,
            "excluded": excluded,
        });
        let round = Round {
            round: self.history.len() + 1,
            added_superior: std::mem::take(&mut self.pending_superior),
            added_inferior: std::mem::take(&mut self.pending_inferior),
            method,
            expression: self.expression(),
            pgraph: self.relation.graph().to_json(schema),
            winnow: self.winnow.clone(),
        };
        self.history.push(round);
        Ok(json!({
            "round": self.history.len(),
            "expression": self.expression(),
            "pgraph": self.relation.graph().to_json(schema),
            "winnow": self.winnow,
            "explanation": self.explanation,
        }))
    }

    fn expression(&self) -> String {
        self.relation.display(self.dataset.data.schema()).to_string()
    }

    pub fn snapshot(&self) -> Value {
        let schema = self.dataset.data.schema();
        json!({
            "id": self.id,
            "dataset": self.dataset.id,
            "superior": self.superior,
            "inferior": self.inferior,
            "pending": { "superior": self.pending_superior, "inferior": self.pending_inferior },
            "expression": self.expression(),
            "pgraph": self.relation.graph().to_json(schema),
            "winnow": self.winnow,
            "explanation": self.explanation,
            "history": self.history,
        })
    }
}

fn named_edges(schema: &Schema, edges: &[(usize, usize)]) -> Vec<[String; 2]> {
    edges
        .iter()
        .map(|&(a, b)| [schema.name(a).to_string(), schema.name(b).to_string()])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cars() -> Arc<StoredDataset> {
        let schema = Schema::from_json(
            r#"{"attributes":[
            {"name":"make","kind":"categorical","ranked":["bmw","ford","kia"]},
            {"name":"price","kind":"numeric","preference":"lower"},
            {"name":"year","kind":"numeric","preference":"higher"}]}"#,
        )
        .unwrap();
        let csv = "id,make,price,year\nt1,ford,30000,2007\nt2,bmw,45000,2008\nt3,kia,20000,2007\nt4,ford,40000,2008\nt5,bmw,50000,2006\n";
        let data = Dataset::from_csv(Arc::new(schema), csv).unwrap();
        Arc::new(StoredDataset::new("d1".into(), data))
    }

    fn ids(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn rounds_accumulate() {
        let mut s = Session::new("s1".into(), cars());
        assert_eq!(s.snapshot()["winnow"], json!(["t1", "t2", "t3", "t4"]));
        let r = s.elicit().unwrap();
        assert_eq!(r["winnow"], json!(["t1", "t2", "t3", "t4"]));
        s.feedback(&ids(&["t3"]), &[]).unwrap();
        let r = s.elicit().unwrap();
        assert_eq!(r["winnow"], json!(["t3"]));
        assert_eq!(r["explanation"]["excluded"][0], json!({"id": "t1", "dominator": "t3"}));
        assert_eq!(s.history().len(), 2);
        assert_eq!(s.history()[1].added_superior, ["t3"]);
        s.feedback(&ids(&["t2"]), &[]).unwrap();
        let r = s.elicit().unwrap();
        let w: Vec<String> = serde_json::from_value(r["winnow"].clone()).unwrap();
        assert!(w.contains(&"t2".into()) && w.contains(&"t3".into()));
    }

    #[test]
    fn rejected_feedback_leaves_state_alone() {
        let mut s = Session::new("s1".into(), cars());
        let err = s.feedback(&ids(&["t5"]), &[]).unwrap_err();
        assert_eq!(err.status, StatusCode::CONFLICT);
        assert_eq!(err.details.unwrap()["dominator"], json!("t2"));
        assert_eq!(s.feedback(&ids(&["t9"]), &[]).unwrap_err().status, StatusCode::BAD_REQUEST);
        assert_eq!(
            s.feedback(&ids(&["t3"]), &ids(&["t3"])).unwrap_err().status,
            StatusCode::BAD_REQUEST
        );
        assert_eq!(s.snapshot()["superior"], json!([]));
    }

    #[test]
    fn inferior_examples_use_exhaustive_search() {
        let mut s = Session::new("s1".into(), cars());
        s.feedback(&ids(&["t4"]), &ids(&["t3"])).unwrap();
        let r = s.elicit().unwrap();
        assert_eq!(r["expression"], json!("year & price & make"));
        assert_eq!(r["winnow"], json!(["t4"]));
        assert_eq!(r["explanation"]["method"], json!("exhaustive"));
    }
}
