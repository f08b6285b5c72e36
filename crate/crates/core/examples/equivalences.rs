// Brute-force equivalence of the derived operators with their definitions.

use std::error::Error;

use normcheck::{brute_force_equiv, parse_formula, PropositionSet};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let props = PropositionSet::new(["a", "b"])?;
    let pairs = [
        ("F a", "true U a"),
        ("G a", "!F !a"),
        ("a W b", "a U b | G a"),
        ("!a (+) b", "G !a | F (a & F b)"),
        ("G a", "F a"),
    ];
    for (f, g) in pairs {
        let r = brute_force_equiv(&parse_formula(f)?, &parse_formula(g)?, &props, 3, 2)?;
        match r.counterexample {
            None => println!("{f}  ==  {g}   ({} traces)", r.traces_checked),
            Some((t, x, y)) => println!("{f}  !=  {g}   on {t}: {x} vs {y}"),
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
