// The naive conditionals contradict each other once a court order is given.
// Rewriting them with their overrides removes the contradiction.

use std::error::Error;

use normcheck::fixtures::{NAIVE_CONDITIONALS, NAIVE_OVERRIDES};
use normcheck::norms::{apply_overrides, parse_conditionals, parse_overrides};
use normcheck::{parse_formula, satisfiable_within, Formula, PropositionSet};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let props = PropositionSet::new(["A", "B", "C", "D"])?;
    let naive = parse_conditionals(NAIVE_CONDITIONALS)?;
    let rewritten = apply_overrides(&naive, &parse_overrides(NAIVE_OVERRIDES)?)?;

    let court_order = parse_formula("C")?;
    for (name, set) in [("naive", &naive), ("rewritten", &rewritten)] {
        println!("{name}:");
        for c in set.iter() {
            println!("  {c}");
        }
        let all = Formula::conjunction(
            set.iter()
                .map(|c| c.to_formula())
                .chain([court_order.clone()]),
        );
        match satisfiable_within(&all, &props, 2, 2)? {
            Some(t) => println!("  with C: satisfiable, e.g. {t}"),
            None => println!("  with C: no model within bounds"),
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
