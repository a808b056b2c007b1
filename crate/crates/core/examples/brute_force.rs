// Exhaustive search with both superior and inferior examples.

use std::sync::Arc;

use pskyline::elicitation::winnow_ids;
use pskyline::{brute_force_df, brute_force_opt_fdf, Dataset, Schema};

pub fn run() -> pskyline::Result<()> {
    let schema = Arc::new(Schema::from_json(include_str!("../data/cars.schema.json"))?);
    let cars = Dataset::from_csv(schema.clone(), include_str!("../data/cars.csv"))?;
    if let Some(rel) = brute_force_df(&["t4"], &["t3"], &cars, 5)? {
        println!("some relation: {} -> {:?}", rel.display(&schema), winnow_ids(&rel, &cars));
    }
    if let Some(rel) = brute_force_opt_fdf(&["t4"], &["t3"], &cars, 5)? {
        println!("maximal: {} -> {:?}", rel.display(&schema), winnow_ids(&rel, &cars));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> pskyline::Result<()> {
    run()
}
