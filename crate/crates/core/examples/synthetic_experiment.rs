// Accuracy of elicitation against hidden relations on generated data.

use pskyline::{generate, run_accuracy_experiment, DataKind, GSize, PSkylineRelation};

pub fn run() -> pskyline::Result<()> {
    let pool = generate(DataKind::Uniform, 300, 5, 1)?;
    let hidden = PSkylineRelation::parse("(a1 & a2) * a3 * (a4 & a5)", pool.schema())?;
    println!("hidden: {}", hidden.display(pool.schema()));
    let sizes = [GSize::Fraction(0.1), GSize::Fraction(0.5), GSize::Fraction(0.9)];
    for r in run_accuracy_experiment(&pool, &hidden, &sizes, 3, 3)? {
        println!(
            "G={:<3} of {:<3} P={:.3} R={:.3} F={:.3} ratio={:.3}",
            r.superior,
            r.hidden_winnow, r.precision, r.recall, r.f_measure, r.winnow_size_ratio
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> pskyline::Result<()> {
    run()
}
