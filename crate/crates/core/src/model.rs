//! Schemas, attribute preferences, tuples and datasets.
//!
//! Every attribute carries a total order over its values. Numeric values are
//! exact fixed-point integers (a per-attribute decimal `scale`), categorical
//! values come from a closed, ranked domain. Each tuple caches one "score" per
//! attribute, oriented so that a larger score is always better; all dominance
//! machinery works on scores only.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::attrset::AttrSet;
use crate::error::{Error, Result};

pub const MAX_ATTRIBUTES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Higher,
    Lower,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AttributeKind {
    Numeric { direction: Direction, scale: u32 },
    /// Ranked values, best first.
    Categorical { ranked: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AttributeSpec {
    pub name: String,
    pub kind: AttributeKind,
}

/// Outcome of comparing two values of one attribute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Comparison {
    Better,
    Equal,
    Worse,
}

impl From<Ordering> for Comparison {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Greater => Comparison::Better,
            Ordering::Equal => Comparison::Equal,
            Ordering::Less => Comparison::Worse,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    /// Fixed-point number: the real value is `raw / 10^scale`.
    Num(i64),
    Cat(String),
}

impl AttributeSpec {
    pub fn numeric(name: impl Into<String>, direction: Direction) -> Self {
        AttributeSpec {
            name: name.into(),
            kind: AttributeKind::Numeric {
                direction,
                scale: 0,
            },
        }
    }

    pub fn categorical<S: Into<String>>(
        name: impl Into<String>,
        ranked: impl IntoIterator<Item = S>,
    ) -> Self {
        AttributeSpec {
            name: name.into(),
            kind: AttributeKind::Categorical {
                ranked: ranked.into_iter().map(Into::into).collect(),
            },
        }
    }

    pub fn with_scale(mut self, s: u32) -> Self {
        if let AttributeKind::Numeric { scale, .. } = &mut self.kind {
            *scale = s;
        }
        self
    }

    /// Score of a value: larger is better.
    pub fn score(&self, v: &Value) -> Result<i64> {
        match (&self.kind, v) {
            (AttributeKind::Numeric { direction, .. }, Value::Num(x)) => match direction {
                Direction::Higher => Ok(*x),
                Direction::Lower => x.checked_neg().ok_or_else(|| Error::BadNumber {
                    attr: self.name.clone(),
                    value: x.to_string(),
                    scale: 0,
                }),
            },
            (AttributeKind::Categorical { ranked }, Value::Cat(tok)) => ranked
                .iter()
                .position(|r| r == tok)
                .map(|rank| -(rank as i64))
                .ok_or_else(|| Error::UnrankableValue {
                    attr: self.name.clone(),
                    value: tok.clone(),
                }),
            (AttributeKind::Numeric { .. }, _) => Err(Error::KindMismatch {
                attr: self.name.clone(),
                expected: "numeric",
            }),
            (AttributeKind::Categorical { .. }, _) => Err(Error::KindMismatch {
                attr: self.name.clone(),
                expected: "categorical",
            }),
        }
    }

    fn parse_cell(&self, cell: &str) -> Result<Value> {
        match &self.kind {
            AttributeKind::Numeric { scale, .. } => parse_decimal(cell, *scale)
                .map(Value::Num)
                .ok_or_else(|| Error::BadNumber {
                    attr: self.name.clone(),
                    value: cell.to_string(),
                    scale: *scale,
                }),
            AttributeKind::Categorical { ranked } => {
                if ranked.iter().any(|r| r == cell) {
                    Ok(Value::Cat(cell.to_string()))
                } else {
                    Err(Error::UnrankableValue {
                        attr: self.name.clone(),
                        value: cell.to_string(),
                    })
                }
            }
        }
    }

    /// Renders a value the way it appears in CSV.
    pub fn format_value(&self, v: &Value) -> String {
        match (&self.kind, v) {
            (AttributeKind::Numeric { scale, .. }, Value::Num(x)) => format_decimal(*x, *scale),
            (_, Value::Cat(s)) => s.clone(),
            (_, Value::Num(x)) => x.to_string(),
        }
    }
}

/// Compares two values of `attr` under its attribute preference.
pub fn compare_values(attr: &AttributeSpec, v1: &Value, v2: &Value) -> Result<Comparison> {
    Ok(attr.score(v1)?.cmp(&attr.score(v2)?).into())
}

/// Parses a decimal literal into a fixed-point integer with `scale` fraction
/// digits. Extra fraction digits are accepted only when they are zeros.
pub fn parse_decimal(text: &str, scale: u32) -> Option<i64> {
    let text = text.trim();
    let (neg, body) = match text.as_bytes().first()? {
        b'-' => (true, &text[1..]),
        b'+' => (false, &text[1..]),
        _ => (false, text),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let scale = scale as usize;
    let (kept, extra) = frac_part.split_at(frac_part.len().min(scale));
    if extra.bytes().any(|b| b != b'0') {
        return None;
    }
    let mut acc: i64 = 0;
    for b in int_part.bytes().chain(kept.bytes()) {
        acc = acc.checked_mul(10)?.checked_add((b - b'0') as i64)?;
    }
    for _ in kept.len()..scale {
        acc = acc.checked_mul(10)?;
    }
    Some(if neg { -acc } else { acc })
}

pub fn format_decimal(raw: i64, scale: u32) -> String {
    if scale == 0 {
        return raw.to_string();
    }
    let pow = 10u128.pow(scale);
    let abs = (raw as i128).unsigned_abs();
    let sign = if raw < 0 { "-" } else { "" };
    format!(
        "{sign}{}.{:0width$}",
        abs / pow,
        abs % pow,
        width = scale as usize
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    attributes: Vec<AttributeSpec>,
    by_name: HashMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct RawSchema {
    attributes: Vec<RawAttribute>,
}

#[derive(Serialize, Deserialize)]
struct RawAttribute {
    name: String,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    preference: Option<Direction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scale: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ranked: Option<Vec<String>>,
}

impl Schema {
    pub fn new(attributes: Vec<AttributeSpec>) -> Result<Schema> {
        if attributes.is_empty() {
            return Err(Error::Schema("a schema needs at least one attribute".into()));
        }
        if attributes.len() > MAX_ATTRIBUTES {
            return Err(Error::TooManyAttributes(attributes.len()));
        }
        let mut by_name = HashMap::with_capacity(attributes.len());
        for (i, a) in attributes.iter().enumerate() {
            if a.name.is_empty() || a.name == "id" {
                return Err(Error::Schema(format!("`{}` is not a valid attribute name", a.name)));
            }
            if by_name.insert(a.name.clone(), i).is_some() {
                return Err(Error::DuplicateAttribute(a.name.clone()));
            }
            if let AttributeKind::Categorical { ranked } = &a.kind {
                if ranked.is_empty() {
                    return Err(Error::Schema(format!("`{}` has an empty ranked domain", a.name)));
                }
                for (j, v) in ranked.iter().enumerate() {
                    if ranked[..j].contains(v) {
                        return Err(Error::Schema(format!(
                            "`{}` ranks `{v}` more than once",
                            a.name
                        )));
                    }
                }
            }
        }
        Ok(Schema {
            attributes,
            by_name,
        })
    }

    /// Numeric attributes sharing one direction, named as given.
    pub fn numeric<S: AsRef<str>>(names: &[S], direction: Direction) -> Result<Schema> {
        Schema::new(
            names
                .iter()
                .map(|n| AttributeSpec::numeric(n.as_ref(), direction))
                .collect(),
        )
    }

    /// `n` higher-is-better integer attributes named `A1..An`.
    pub fn uniform(n: usize) -> Result<Schema> {
        let names: Vec<String> = (1..=n).map(|i| format!("A{i}")).collect();
        Schema::numeric(&names, Direction::Higher)
    }

    /// Parses the JSON schema format.
    pub fn from_json(text: &str) -> Result<Schema> {
        let raw: RawSchema = serde_json::from_str(text)?;
        let mut attrs = Vec::with_capacity(raw.attributes.len());
        for r in raw.attributes {
            let kind = match r.kind.as_str() {
                "numeric" => {
                    if r.ranked.is_some() {
                        return Err(Error::Schema(format!(
                            "numeric attribute `{}` cannot have a ranked list",
                            r.name
                        )));
                    }
                    let direction = r.preference.ok_or_else(|| {
                        Error::Schema(format!(
                            "numeric attribute `{}` needs \"preference\": \"higher\" | \"lower\"",
                            r.name
                        ))
                    })?;
                    AttributeKind::Numeric {
                        direction,
                        scale: r.scale.unwrap_or(0),
                    }
                }
                "categorical" => {
                    if r.preference.is_some() || r.scale.is_some() {
                        return Err(Error::Schema(format!(
                            "categorical attribute `{}` takes only a ranked list",
                            r.name
                        )));
                    }
                    let ranked = r.ranked.ok_or_else(|| {
                        Error::Schema(format!("categorical attribute `{}` needs \"ranked\"", r.name))
                    })?;
                    AttributeKind::Categorical { ranked }
                }
                other => {
                    return Err(Error::Schema(format!(
                        "attribute `{}` has unknown kind `{other}`",
                        r.name
                    )))
                }
            };
            attrs.push(AttributeSpec { name: r.name, kind });
        }
        Schema::new(attrs)
    }

    pub fn to_json(&self) -> String {
        let raw = RawSchema {
            attributes: self
                .attributes
                .iter()
                .map(|a| match &a.kind {
                    AttributeKind::Numeric { direction, scale } => RawAttribute {
                        name: a.name.clone(),
                        kind: "numeric".into(),
                        preference: Some(*direction),
                        scale: (*scale != 0).then_some(*scale),
                        ranked: None,
                    },
                    AttributeKind::Categorical { ranked } => RawAttribute {
                        name: a.name.clone(),
                        kind: "categorical".into(),
                        preference: None,
                        scale: None,
                        ranked: Some(ranked.clone()),
                    },
                })
                .collect(),
        };
        serde_json::to_string(&raw).expect("schema serializes")
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    pub fn attributes(&self) -> &[AttributeSpec] {
        &self.attributes
    }

    pub fn attribute(&self, i: usize) -> &AttributeSpec {
        &self.attributes[i]
    }

    pub fn name(&self, i: usize) -> &str {
        &self.attributes[i].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn all(&self) -> AttrSet {
        AttrSet::full(self.len())
    }

    pub fn attr_set<S: AsRef<str>>(&self, names: &[S]) -> Result<AttrSet> {
        names
            .iter()
            .map(|n| {
                self.index_of(n.as_ref())
                    .ok_or_else(|| Error::UnknownAttribute(n.as_ref().to_string()))
            })
            .collect()
    }

    pub fn names_of(&self, set: AttrSet) -> Vec<&str> {
        set.iter().map(|i| self.name(i)).collect()
    }

    /// Renders a set as `{a, b}`.
    pub fn fmt_set(&self, set: AttrSet) -> String {
        format!("{{{}}}", self.names_of(set).join(", "))
    }
}

/// One row. `scores` mirrors `values` with "larger is better" orientation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tuple {
    id: String,
    values: Vec<Value>,
    scores: Vec<i64>,
}

impl Tuple {
    pub fn new(schema: &Schema, id: impl Into<String>, values: Vec<Value>) -> Result<Tuple> {
        let id = id.into();
        if values.len() != schema.len() {
            return Err(Error::Arity {
                id,
                got: values.len(),
                expected: schema.len(),
            });
        }
        let scores = schema
            .attributes()
            .iter()
            .zip(&values)
            .map(|(a, v)| a.score(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Tuple { id, values, scores })
    }

    /// Tuple over an all-numeric schema given raw fixed-point numbers.
    pub fn numeric(schema: &Schema, id: impl Into<String>, raw: &[i64]) -> Result<Tuple> {
        Tuple::new(schema, id, raw.iter().map(|&x| Value::Num(x)).collect())
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    #[inline]
    pub fn scores(&self) -> &[i64] {
        &self.scores
    }

    /// Same values on every attribute.
    pub fn same_values(&self, other: &Tuple) -> bool {
        self.scores == other.scores
    }
}

/// A finite set of tuples with distinct ids, in a fixed order.
#[derive(Debug, Clone)]
pub struct Dataset {
    schema: Arc<Schema>,
    tuples: Vec<Tuple>,
    index: HashMap<String, usize>,
}

impl Dataset {
    pub fn new(schema: Arc<Schema>, tuples: Vec<Tuple>) -> Result<Dataset> {
        let mut index = HashMap::with_capacity(tuples.len());
        for (i, t) in tuples.iter().enumerate() {
            if t.values.len() != schema.len() {
                return Err(Error::Arity {
                    id: t.id.clone(),
                    got: t.values.len(),
                    expected: schema.len(),
                });
            }
            if index.insert(t.id.clone(), i).is_some() {
                return Err(Error::DuplicateId(t.id.clone()));
            }
        }
        Ok(Dataset {
            schema,
            tuples,
            index,
        })
    }

    /// Reads RFC-4180 CSV whose header names the schema attributes in any
    /// order. An `id` column, when present, supplies row ids; otherwise rows
    /// are named `t1..tn` in file order. Columns not in the schema are ignored.
    pub fn from_csv(schema: Arc<Schema>, text: &str) -> Result<Dataset> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers = reader.headers()?.clone();
        let position = |name: &str| headers.iter().position(|h| h == name);
        let columns = schema
            .attributes()
            .iter()
            .map(|a| position(&a.name).ok_or_else(|| Error::MissingColumn(a.name.clone())))
            .collect::<Result<Vec<_>>>()?;
        let id_column = position("id");

        let mut tuples = Vec::new();
        for (row, record) in reader.records().enumerate() {
            let record = record?;
            let id = match id_column {
                Some(c) => record.get(c).unwrap_or_default().to_string(),
                None => format!("t{}", row + 1),
            };
            let values = schema
                .attributes()
                .iter()
                .zip(&columns)
                .map(|(a, &c)| a.parse_cell(record.get(c).unwrap_or_default()))
                .collect::<Result<Vec<_>>>()?;
            tuples.push(Tuple::new(&schema, id, values)?);
        }
        Dataset::new(schema, tuples)
    }

    /// Writes CSV with an `id` column first, attributes in schema order.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["id"];
        header.extend(self.schema.attributes().iter().map(|a| a.name.as_str()));
        w.write_record(&header).expect("in-memory write");
        for t in &self.tuples {
            let mut rec = vec![t.id.clone()];
            rec.extend(
                self.schema
                    .attributes()
                    .iter()
                    .zip(&t.values)
                    .map(|(a, v)| a.format_value(v)),
            );
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8 csv")
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn schema_arc(&self) -> &Arc<Schema> {
        &self.schema
    }

    pub fn tuples(&self) -> &[Tuple] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn get(&self, id: &str) -> Option<&Tuple> {
        self.position(id).map(|i| &self.tuples[i])
    }

    /// Resolves ids to positions, failing on the first unknown id.
    pub fn positions<S: AsRef<str>>(&self, ids: &[S]) -> Result<Vec<usize>> {
        ids.iter()
            .map(|id| {
                self.position(id.as_ref())
                    .ok_or_else(|| Error::UnknownId(id.as_ref().to_string()))
            })
            .collect()
    }

    pub fn ids(&self) -> Vec<&str> {
        self.tuples.iter().map(|t| t.id.as_str()).collect()
    }

    /// The tuples at `positions`, in the given order.
    pub fn subset(&self, positions: &[usize]) -> Dataset {
        let tuples: Vec<Tuple> = positions.iter().map(|&i| self.tuples[i].clone()).collect();
        Dataset::new(self.schema.clone(), tuples).expect("subset of a valid dataset")
    }
}

impl fmt::Display for Dataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_csv())
    }
}
