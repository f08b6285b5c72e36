// Every trace over {A, B, C, D} with up to three prefix positions and a
// one-position loop, checked against the five rows of the compliance table.
//
// ```bash
// cargo run --release --example compliance_table
// ```

use std::error::Error;

use normcheck::fixtures::PRIVACY_NORMS;
use normcheck::oracle::{table1_check, TABLE1_BOUNDS};
use normcheck::parse_norms;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let norms = parse_norms(PRIVACY_NORMS)?;
    let report = table1_check(&norms, TABLE1_BOUNDS, 1)?;

    println!("{} traces", report.traces);
    for row in &report.rows {
        println!(
            "{:<12} expected {:<17} matched {:>6}  witness {}",
            row.minimal_set,
            row.expected.to_string(),
            row.matched,
            row.witness.as_deref().unwrap_or("-")
        );
    }
    report.verify()?;
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
