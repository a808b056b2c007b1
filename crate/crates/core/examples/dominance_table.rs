// Fast dominance test against the semantic definition.

use std::sync::Arc;

use pskyline::{dominates, dominates_semantic, top, Dataset, PSkylineRelation, Schema, Tuple};

pub fn run() -> pskyline::Result<()> {
    let schema = Arc::new(Schema::uniform(7)?);
    let rows: [&[i64]; 3] = [&[1, 1, 1, 1, 1, 1, 1], &[2, 0, 1, 0, 2, 1, 0], &[2, 0, 1, 0, 1, 2, 0]];
    let tuples = rows
        .iter()
        .enumerate()
        .map(|(i, r)| Tuple::numeric(&schema, format!("t{}", i + 1), r))
        .collect::<pskyline::Result<Vec<_>>>()?;
    let data = Dataset::new(schema.clone(), tuples)?;
    let rel = PSkylineRelation::parse("(A1 & A2) * ((A3 * A5) & (A4 * (A6 & A7)))", &schema)?;
    println!("relation: {}", rel.display(&schema));
    let t = data.tuples();
    for (a, b) in [(1, 0), (0, 1), (2, 0), (0, 2)] {
        let (x, y) = (&t[a], &t[b]);
        println!(
            "{} > {}: fast={} semantic={} top={}",
            x.id(),
            y.id(),
            dominates(rel.graph(), x, y),
            dominates_semantic(rel.tree(), x, y),
            schema.fmt_set(top(rel.graph(), x, y)),
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> pskyline::Result<()> {
    run()
}
