// Negative and positive constraints derived from example tuples.

use std::sync::Arc;

use pskyline::{build_negative, build_positive, reduce_via_skyline, Dataset, Schema};

pub fn run() -> pskyline::Result<()> {
    let schema = Arc::new(Schema::from_json(include_str!("../data/cars.schema.json"))?);
    let cars = Dataset::from_csv(schema.clone(), include_str!("../data/cars.csv"))?;
    let raw = build_negative(&["t3"], &cars)?;
    println!("raw: {}", raw.to_json(&schema));
    println!("deduplicated: {}", raw.dedup().len());
    println!("non-redundant: {}", raw.remove_redundant().to_json(&schema));
    println!("skyline pool: {}", reduce_via_skyline(&["t3"], &cars)?.len());
    for p in build_positive(&["t4"], &["t1", "t3"], &cars)? {
        println!("positive: {}", p.to_json(&schema));
        println!("simplified: {}", p.simplified().to_json(&schema));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> pskyline::Result<()> {
    run()
}
