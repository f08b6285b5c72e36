// All-paths checking with a counterexample lasso, and the existential reading.

use std::error::Error;

use normcheck::eval::exists_path;
use normcheck::{check_state, parse_formula, PropositionSet, TransitionSystem};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let props = PropositionSet::new(["a"])?;
    let ts = TransitionSystem::new(
        props,
        &[("s", &[]), ("good", &["a"]), ("bad", &[])],
        &[
            ("s", "good"),
            ("s", "bad"),
            ("good", "good"),
            ("bad", "bad"),
        ],
    )?;
    let f = parse_formula("F a")?;

    let v = check_state(&ts, "s", &f, ts.default_bounds())?;
    println!(
        "all paths from s satisfy {f}: {} ({} lassos)",
        v.holds, v.lassos_checked
    );
    if let Some(c) = &v.counterexample {
        println!("  counterexample {}", ts.path_to_string(&c.path));
    }
    if let Some(w) = exists_path(&ts, "s", &f, ts.default_bounds())? {
        println!("some path satisfies it: {}", ts.path_to_string(&w.path));
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
