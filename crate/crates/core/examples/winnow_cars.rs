// Skyline and winnow over the bundled cars table.

use std::sync::Arc;

use pskyline::{skyline, winnow, Dataset, PSkylineRelation, Schema};

pub fn run() -> pskyline::Result<()> {
    let schema = Arc::new(Schema::from_json(include_str!("../data/cars.schema.json"))?);
    let cars = Dataset::from_csv(schema.clone(), include_str!("../data/cars.csv"))?;
    println!("skyline: {:?}", skyline(&cars).ids());
    for text in ["make * price * year", "year & (price * make)", "price & year & make"] {
        let rel = PSkylineRelation::parse(text, &schema)?;
        println!("{:<24} -> {:?}", rel.display(&schema).to_string(), winnow(&rel, &cars)?.ids());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> pskyline::Result<()> {
    run()
}
