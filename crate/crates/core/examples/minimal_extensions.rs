// Minimal extensions of a p-skyline relation by rule application.

use pskyline::{minimal_extensions, PSkylineRelation, Schema};

pub fn run() -> pskyline::Result<()> {
    let schema = Schema::uniform(4)?;
    let rel = PSkylineRelation::parse("(A1 & A2) * A3 * A4", &schema)?;
    println!("from {}", rel.display(&schema));
    for ext in minimal_extensions(rel.tree(), schema.len()) {
        let added: Vec<String> = ext
            .added
            .iter()
            .map(|&(a, b)| format!("{}->{}", schema.name(a), schema.name(b)))
            .collect();
        println!(
            "  {:<8} {:<28} + {}",
            ext.application.to_string(),
            ext.tree.display(&schema).to_string(),
            added.join(" ")
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> pskyline::Result<()> {
    run()
}
