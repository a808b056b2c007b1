// Validating digraphs as p-graphs and rendering them.

use pskyline::{parse, validate, Digraph, PGraph, Schema};

pub fn run() -> pskyline::Result<()> {
    let schema = Schema::uniform(4)?;
    let candidates: [&[(usize, usize)]; 4] = [
        &[(0, 1), (0, 2), (0, 3), (2, 3)],
        &[(0, 1), (1, 2)],
        &[(0, 1), (2, 3), (2, 1)],
        &[(0, 0)],
    ];
    for edges in candidates {
        match validate(&Digraph::from_edges(4, edges)) {
            Ok(()) => println!("{edges:?}: p-graph"),
            Err(v) => println!("{edges:?}: {}", v.describe(&schema)),
        }
    }
    let g = PGraph::from_expr(&parse("A1 & (A2 * (A3 & A4))", &schema)?, 4);
    println!("{}", g.to_json(&schema));
    print!("{}", g.to_dot(&schema));
    println!("back to expression: {}", g.to_expr()?.display(&schema));
    Ok(())
}

#[allow(dead_code)]
fn main() -> pskyline::Result<()> {
    run()
}
