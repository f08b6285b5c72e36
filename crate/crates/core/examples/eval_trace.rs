// Subformula truth table of a compensation formula on a lasso trace.

use std::error::Error;

use normcheck::eval::label;
use normcheck::{eval_comp_direct, parse_formula, LassoTrace, PropositionSet};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let props = PropositionSet::new(["A", "B", "C", "D"])?;
    let trace = LassoTrace::from_names(&props, &[&[], &["A", "D"], &["B"]], &[&[]])?;
    let f = parse_formula("!C -> !A (+) B")?;

    let table = label(&f, &trace)?;
    println!("{trace}");
    for sub in table.subformulas() {
        let row: String = table
            .column(sub)
            .unwrap()
            .iter()
            .map(|&b| if b { '1' } else { '.' })
            .collect();
        println!("{row}  {sub}");
    }

    let direct = eval_comp_direct(&parse_formula("!A")?, &parse_formula("B")?, &trace)?;
    println!("!A (+) B by definition: {direct}");
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
