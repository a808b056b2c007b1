//! p-expressions: prioritized (`&`) and Pareto (`*`) accumulation of
//! attribute preferences.
//!
//! Concrete syntax, `&` binding tighter than `*`:
//!
//! ```text
//! expr   := pterm ('*' pterm)*
//! pterm  := factor ('&' factor)*
//! factor := IDENT | '(' expr ')'
//! ```
//!
//! `⊗` is accepted as a synonym for `*`.

use std::fmt;

use serde_json::{json, Value as Json};

use crate::attrset::AttrSet;
use crate::error::{Error, Result};
use crate::model::Schema;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Prior,
    Pareto,
}

/// A p-expression over attribute indices. Composite nodes hold at least two
/// children and every attribute occurs at most once.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PExpr {
    Leaf(usize),
    Prior(Vec<PExpr>),
    Pareto(Vec<PExpr>),
}

impl PExpr {
    pub fn leaf(a: usize) -> PExpr {
        PExpr::Leaf(a)
    }

    /// Builds an `op` node, collapsing a single child to itself.
    pub fn node(op: Op, mut children: Vec<PExpr>) -> PExpr {
        if children.len() == 1 {
            return children.pop().unwrap();
        }
        match op {
            Op::Prior => PExpr::Prior(children),
            Op::Pareto => PExpr::Pareto(children),
        }
    }

    pub fn op(&self) -> Option<Op> {
        match self {
            PExpr::Leaf(_) => None,
            PExpr::Prior(_) => Some(Op::Prior),
            PExpr::Pareto(_) => Some(Op::Pareto),
        }
    }

    pub fn children(&self) -> &[PExpr] {
        match self {
            PExpr::Leaf(_) => &[],
            PExpr::Prior(c) | PExpr::Pareto(c) => c,
        }
    }

    pub fn as_leaf(&self) -> Option<usize> {
        match self {
            PExpr::Leaf(a) => Some(*a),
            _ => None,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, PExpr::Leaf(_))
    }

    /// Attributes occurring in the expression.
    pub fn vars(&self) -> AttrSet {
        match self {
            PExpr::Leaf(a) => AttrSet::singleton(*a),
            PExpr::Prior(c) | PExpr::Pareto(c) => c.iter().fold(AttrSet::EMPTY, |s, e| s | e.vars()),
        }
    }

    /// Checks arity and the use-at-most-once rule against `n` attributes.
    pub fn check(&self, n: usize) -> Result<()> {
        fn go(e: &PExpr, n: usize, seen: &mut AttrSet) -> Result<()> {
            match e {
                PExpr::Leaf(a) => {
                    if *a >= n {
                        return Err(Error::UnknownAttribute(format!("#{a}")));
                    }
                    if seen.contains(*a) {
                        return Err(Error::RepeatedAttribute(format!("#{a}")));
                    }
                    seen.insert(*a);
                    Ok(())
                }
                PExpr::Prior(c) | PExpr::Pareto(c) => {
                    if c.len() < 2 {
                        return Err(Error::Internal(
                            "composite p-expression node with fewer than two children".into(),
                        ));
                    }
                    c.iter().try_for_each(|x| go(x, n, seen))
                }
            }
        }
        let mut seen = AttrSet::EMPTY;
        go(self, n, &mut seen)
    }

    /// Flattens same-kind parent/child pairs and single-child nodes.
    pub fn normalize(&self) -> SyntaxTree {
        SyntaxTree(normalized(self))
    }

    /// Renders the expression with attribute names from `schema`.
    pub fn display<'a>(&'a self, schema: &'a Schema) -> Display<'a> {
        Display { expr: self, schema }
    }

    /// JSON AST: `{"op":"prior"|"pareto","children":[..]}` or `{"attr":name}`.
    pub fn to_json(&self, schema: &Schema) -> Json {
        match self {
            PExpr::Leaf(a) => json!({ "attr": schema.name(*a) }),
            PExpr::Prior(c) | PExpr::Pareto(c) => json!({
                "op": if matches!(self, PExpr::Prior(_)) { "prior" } else { "pareto" },
                "children": c.iter().map(|e| e.to_json(schema)).collect::<Vec<_>>(),
            }),
        }
    }
}

fn normalized(e: &PExpr) -> PExpr {
    match e {
        PExpr::Leaf(a) => PExpr::Leaf(*a),
        PExpr::Prior(c) | PExpr::Pareto(c) => {
            let op = e.op().unwrap();
            let mut out = Vec::with_capacity(c.len());
            for child in c {
                let child = normalized(child);
                if child.op() == Some(op) {
                    match child {
                        PExpr::Prior(cc) | PExpr::Pareto(cc) => out.extend(cc),
                        PExpr::Leaf(_) => unreachable!(),
                    }
                } else {
                    out.push(child);
                }
            }
            PExpr::node(op, out)
        }
    }
}

/// A normalized p-expression: no node has a child of its own kind.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SyntaxTree(PExpr);

impl SyntaxTree {
    pub fn new(e: &PExpr) -> SyntaxTree {
        e.normalize()
    }

    pub fn expr(&self) -> &PExpr {
        &self.0
    }

    pub fn into_expr(self) -> PExpr {
        self.0
    }

    pub fn vars(&self) -> AttrSet {
        self.0.vars()
    }

    pub fn display<'a>(&'a self, schema: &'a Schema) -> Display<'a> {
        self.0.display(schema)
    }

    pub fn to_json(&self, schema: &Schema) -> Json {
        self.0.to_json(schema)
    }

    /// Child-index path from the root to the leaf holding `attr`.
    pub fn leaf_path(&self, attr: usize) -> Option<Vec<usize>> {
        fn go(e: &PExpr, attr: usize, path: &mut Vec<usize>) -> bool {
            match e {
                PExpr::Leaf(a) => *a == attr,
                PExpr::Prior(c) | PExpr::Pareto(c) => {
                    for (i, child) in c.iter().enumerate() {
                        path.push(i);
                        if go(child, attr, path) {
                            return true;
                        }
                        path.pop();
                    }
                    false
                }
            }
        }
        let mut path = Vec::new();
        go(&self.0, attr, &mut path).then_some(path)
    }

    /// The node at `path`.
    pub fn at(&self, path: &[usize]) -> Option<&PExpr> {
        path.iter()
            .try_fold(&self.0, |node, &i| node.children().get(i))
    }
}

impl AsRef<PExpr> for SyntaxTree {
    fn as_ref(&self) -> &PExpr {
        &self.0
    }
}

/// Pareto accumulation of every attribute of `schema`.
pub fn skyline_expr(schema: &Schema) -> SyntaxTree {
    skyline_over(schema.len())
}

pub fn skyline_over(n: usize) -> SyntaxTree {
    SyntaxTree(PExpr::node(Op::Pareto, (0..n).map(PExpr::Leaf).collect()))
}

/// Prioritized chain over `order`, most important first.
pub fn chain(order: &[usize]) -> SyntaxTree {
    SyntaxTree(PExpr::node(Op::Prior, order.iter().map(|&a| PExpr::Leaf(a)).collect()))
}

pub struct Display<'a> {
    expr: &'a PExpr,
    schema: &'a Schema,
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(self.expr, self.schema, f)
    }
}

fn write_expr(e: &PExpr, schema: &Schema, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let (children, sep) = match e {
        PExpr::Leaf(a) => return f.write_str(schema.name(*a)),
        PExpr::Prior(c) => (c, " & "),
        PExpr::Pareto(c) => (c, " * "),
    };
    for (i, child) in children.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        if !child.is_leaf() {
            f.write_str("(")?;
            write_expr(child, schema, f)?;
            f.write_str(")")?;
        } else {
            write_expr(child, schema, f)?;
        }
    }
    Ok(())
}

/// Parses `text` against the attribute names of `schema`.
pub fn parse(text: &str, schema: &Schema) -> Result<PExpr> {
    let mut p = Parser {
        tokens: tokenize(text)?,
        pos: 0,
        end: text.len(),
        schema,
        seen: AttrSet::EMPTY,
    };
    let e = p.expr()?;
    if let Some((tok, at)) = p.tokens.get(p.pos) {
        return Err(Error::Syntax {
            pos: *at,
            msg: format!("unexpected {}", tok.describe()),
        });
    }
    Ok(e)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    And,
    Star,
    Open,
    Close,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Ident(s) => format!("identifier `{s}`"),
            Token::And => "`&`".into(),
            Token::Star => "`*`".into(),
            Token::Open => "`(`".into(),
            Token::Close => "`)`".into(),
        }
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '.' || c == '-'
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '&' => {
                out.push((Token::And, i));
                chars.next();
            }
            '*' | '⊗' => {
                out.push((Token::Star, i));
                chars.next();
            }
            '(' => {
                out.push((Token::Open, i));
                chars.next();
            }
            ')' => {
                out.push((Token::Close, i));
                chars.next();
            }
            c if is_ident_char(c) => {
                let mut s = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if !is_ident_char(c) {
                        break;
                    }
                    s.push(c);
                    chars.next();
                }
                out.push((Token::Ident(s), i));
            }
            other => {
                return Err(Error::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end: usize,
    schema: &'a Schema,
    seen: AttrSet,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(_, at)| *at)
    }

    fn expr(&mut self) -> Result<PExpr> {
        self.chain(Token::Star, Op::Pareto, Self::pterm)
    }

    fn pterm(&mut self) -> Result<PExpr> {
        self.chain(Token::And, Op::Prior, Self::factor)
    }

    fn chain(
        &mut self,
        sep: Token,
        op: Op,
        item: fn(&mut Self) -> Result<PExpr>,
    ) -> Result<PExpr> {
        let mut items = vec![item(self)?];
        while self.peek() == Some(&sep) {
            self.pos += 1;
            items.push(item(self)?);
        }
        Ok(PExpr::node(op, items))
    }

    fn factor(&mut self) -> Result<PExpr> {
        let at = self.offset();
        match self.tokens.get(self.pos).map(|(t, _)| t.clone()) {
            Some(Token::Ident(name)) => {
                self.pos += 1;
                let a = self
                    .schema
                    .index_of(&name)
                    .ok_or_else(|| Error::UnknownAttribute(name.clone()))?;
                if self.seen.contains(a) {
                    return Err(Error::RepeatedAttribute(name));
                }
                self.seen.insert(a);
                Ok(PExpr::Leaf(a))
            }
            Some(Token::Open) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Token::Close) {
                    return Err(Error::Syntax {
                        pos: self.offset(),
                        msg: "expected `)`".into(),
                    });
                }
                self.pos += 1;
                Ok(e)
            }
            Some(tok) => Err(Error::Syntax {
                pos: at,
                msg: format!("expected an attribute or `(`, found {}", tok.describe()),
            }),
            None => Err(Error::Syntax {
                pos: at,
                msg: "unexpected end of input".into(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Direction;

    fn schema(names: &[&str]) -> Schema {
        Schema::numeric(names, Direction::Higher).unwrap()
    }

    #[test]
    fn parses_precedence_and_chains() {
        let s = schema(&["make", "price", "year"]);
        let e = parse("year & (price * make)", &s).unwrap();
        assert_eq!(
            e,
            PExpr::Prior(vec![
                PExpr::Leaf(2),
                PExpr::Pareto(vec![PExpr::Leaf(1), PExpr::Leaf(0)])
            ])
        );
        assert_eq!(parse("price", &s).unwrap(), PExpr::Leaf(1));
        assert_eq!(
            parse("year & price & make", &s).unwrap(),
            PExpr::Prior(vec![PExpr::Leaf(2), PExpr::Leaf(1), PExpr::Leaf(0)])
        );
        assert_eq!(
            parse("year & price * make", &s).unwrap(),
            PExpr::Pareto(vec![
                PExpr::Prior(vec![PExpr::Leaf(2), PExpr::Leaf(1)]),
                PExpr::Leaf(0)
            ])
        );
        assert_eq!(
            parse("year ⊗ price", &s).unwrap(),
            PExpr::Pareto(vec![PExpr::Leaf(2), PExpr::Leaf(1)])
        );
    }

    #[test]
    fn parse_errors_carry_positions() {
        let s = schema(&["a", "b"]);
        assert_eq!(
            parse("a & ", &s),
            Err(Error::Syntax {
                pos: 4,
                msg: "unexpected end of input".into()
            })
        );
        assert!(matches!(parse("(a * b", &s), Err(Error::Syntax { pos: 6, .. })));
        assert!(matches!(parse("a b", &s), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse("a # b", &s), Err(Error::Syntax { pos: 2, .. })));
        assert_eq!(parse("a & c", &s), Err(Error::UnknownAttribute("c".into())));
        assert_eq!(parse("a & a", &s), Err(Error::RepeatedAttribute("a".into())));
    }

    #[test]
    fn normalization_flattens_same_kind_nesting() {
        let s = schema(&["A", "B", "C", "D", "E", "F"]);
        let e = parse("(A * (B & C)) * (D & (E * F))", &s).unwrap();
        let t = e.normalize();
        assert_eq!(
            t.expr(),
            &PExpr::Pareto(vec![
                PExpr::Leaf(0),
                PExpr::Prior(vec![PExpr::Leaf(1), PExpr::Leaf(2)]),
                PExpr::Prior(vec![
                    PExpr::Leaf(3),
                    PExpr::Pareto(vec![PExpr::Leaf(4), PExpr::Leaf(5)])
                ]),
            ])
        );
        assert_eq!(t.expr().normalize(), t);
        let e = parse("(A & B) & C", &s).unwrap();
        assert_eq!(
            e.normalize().expr(),
            &PExpr::Prior(vec![PExpr::Leaf(0), PExpr::Leaf(1), PExpr::Leaf(2)])
        );
    }

    #[test]
    fn vars_and_skyline() {
        let s = schema(&["make", "price", "year"]);
        let e = parse("year & (price * make)", &s).unwrap();
        assert_eq!(e.vars(), s.all());
        assert_eq!(PExpr::Leaf(1).vars(), AttrSet::singleton(1));
        assert_eq!(
            skyline_expr(&s).expr(),
            &PExpr::Pareto(vec![PExpr::Leaf(0), PExpr::Leaf(1), PExpr::Leaf(2)])
        );
        assert_eq!(skyline_expr(&schema(&["x"])).expr(), &PExpr::Leaf(0));
    }

    #[test]
    fn text_round_trip() {
        let s = schema(&["A", "B", "C", "D", "E"]);
        for text in [
            "A",
            "A & B",
            "A * B * C",
            "(A * B) & C",
            "A & (B * (C & D)) & E",
            "(A & B) * (C & (D * E))",
        ] {
            let t = parse(text, &s).unwrap().normalize();
            let shown = t.display(&s).to_string();
            assert_eq!(shown, text);
            assert_eq!(parse(&shown, &s).unwrap().normalize(), t);
        }
    }

    #[test]
    fn json_ast() {
        let s = schema(&["a", "b"]);
        let e = parse("a & b", &s).unwrap();
        assert_eq!(
            e.to_json(&s),
            json!({"op":"prior","children":[{"attr":"a"},{"attr":"b"}]})
        );
    }

    #[test]
    fn leaf_paths() {
        let s = schema(&["A", "B", "C"]);
        let t = parse("(A & B) * C", &s).unwrap().normalize();
        assert_eq!(t.leaf_path(1), Some(vec![0, 1]));
        assert_eq!(t.at(&[0, 1]), Some(&PExpr::Leaf(1)));
        assert_eq!(t.leaf_path(2), Some(vec![1]));
    }
}
