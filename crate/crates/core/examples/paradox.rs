// The privacy-act scenario read two ways.
//
// The compiled norms hold at every state of the system, yet the run that
// collects A and D without a court order breaks the prohibition of D.
//
// ```bash
// cargo run --example paradox
// ```

use std::error::Error;

use normcheck::fixtures::{PRIVACY_NORMS, PRIVACY_TS};
use normcheck::{paradox_report, parse_norms, parse_ts, Bounds};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let norms = parse_norms(PRIVACY_NORMS)?;
    let ts = parse_ts(PRIVACY_TS)?;

    let report = paradox_report(&norms, &ts, &["t0", "t1", "t2"], &["tl"], Bounds::new(4, 4))?;

    for (i, f) in report.formulas.iter().enumerate() {
        println!("N{}  {f}", i + 1);
    }
    for (state, r) in &report.model {
        println!(
            "{state}: {}",
            if r.verdict.holds { "holds" } else { "fails" }
        );
    }
    println!("trace {} is {}", report.trace, report.deontic.status);
    for v in &report.deontic.violations {
        println!(
            "  {} at {} compensated: {}",
            v.norm, v.position, v.compensated
        );
    }

    assert!(report.ltl_satisfied);
    assert!(report.discrepancy);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
