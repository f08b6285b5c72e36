// Parsing, minimal-parenthesis rendering, and expansion to core operators.

use std::error::Error;

use normcheck::parse_formula;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for src in ["(!C) -> ((!A) (+) B)", "G (a -> X (b U c))", "a W b & F c"] {
        let f = parse_formula(src)?;
        println!("{src}");
        println!("  rendered  {f}");
        println!("  expanded  {}", f.expand_derived());
    }
    for bad in ["a U b W c", "a (x) b", "G"] {
        println!("{bad:<10} {}", parse_formula(bad).unwrap_err());
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
