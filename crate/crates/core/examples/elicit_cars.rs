// Eliciting a maximal relation that keeps a chosen car in the winnow.

use std::sync::Arc;

use pskyline::elicitation::winnow_ids;
use pskyline::{elicit, Dataset, ElicitConfig, Schema};

pub fn run() -> pskyline::Result<()> {
    let schema = Arc::new(Schema::from_json(include_str!("../data/cars.schema.json"))?);
    let cars = Dataset::from_csv(schema.clone(), include_str!("../data/cars.csv"))?;
    let e = elicit(&["t3"], &cars, &ElicitConfig::default())?;
    for step in &e.steps {
        println!(
            "admit {:<6} {:<8} {}",
            schema.name(step.attribute),
            format!("{:?}", step.application.rule),
            step.tree.display(&schema)
        );
    }
    println!("result: {}", e.relation.display(&schema));
    println!("winnow: {:?}", winnow_ids(&e.relation, &cars));
    match elicit(&["t5"], &cars, &ElicitConfig::default()) {
        Err(err) => println!("t5: {err}"),
        Ok(_) => unreachable!("t5 is dominated"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> pskyline::Result<()> {
    run()
}
