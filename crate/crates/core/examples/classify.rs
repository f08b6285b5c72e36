// Deontic classification of a few runs of the privacy act.

use std::error::Error;

use normcheck::fixtures::PRIVACY_NORMS;
use normcheck::{classify_trace, parse_norms, TraceLiteral};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let norms = parse_norms(PRIVACY_NORMS)?;
    let props = norms.props();
    let runs = [
        "prefix: {C} {C,A,D} ; loop: {C}",
        "prefix: {} {A} {B} ; loop: {}",
        "prefix: {} {A} ; loop: {}",
        "prefix: {} {A,D} {B} ; loop: {}",
    ];
    for run in runs {
        let trace = TraceLiteral::parse(run)?.to_trace(&props)?;
        let verdict = classify_trace(&norms, &trace)?;
        println!("{run:<36} {}", verdict.status);
        for v in &verdict.violations {
            let fix = v
                .compensation_position
                .map_or("none".to_string(), |k| k.to_string());
            println!("    {} at {}, compensation at {fix}", v.norm, v.position);
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
