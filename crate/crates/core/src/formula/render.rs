//! Printer emitting the fewest parentheses the grammar allows.

use std::fmt;

use super::Formula;

// Binding strength, loosest first.
const IMPLIES: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const TEMPORAL: u8 = 4;
const UNARY: u8 = 5;
const PRIMARY: u8 = 6;

fn level(f: &Formula) -> u8 {
    use Formula::*;
    match f {
        Atom(_) | True | False => PRIMARY,
        Not(_) | Next(_) | Finally(_) | Globally(_) => UNARY,
        Until(..) | WeakUntil(..) | Comp(..) => TEMPORAL,
        And(..) => AND,
        Or(..) => OR,
        Implies(..) => IMPLIES,
    }
}

fn same_temporal_op(a: &Formula, b: &Formula) -> bool {
    use Formula::*;
    matches!(
        (a, b),
        (Until(..), Until(..)) | (WeakUntil(..), WeakUntil(..)) | (Comp(..), Comp(..))
    )
}

fn min(f: &Formula, at_least: u8) -> Child<'_> {
    Child {
        parens: level(f) < at_least,
        f,
    }
}

struct Child<'a> {
    f: &'a Formula,
    parens: bool,
}

impl fmt::Display for Child<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parens {
            write!(out, "({})", self.f)
        } else {
            write!(out, "{}", self.f)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Formula::*;
        match self {
            Atom(p) => write!(out, "{p}"),
            True => out.write_str("true"),
            False => out.write_str("false"),
            Not(f) => write!(out, "!{}", min(f, UNARY)),
            Next(f) => write!(out, "X {}", min(f, UNARY)),
            Finally(f) => write!(out, "F {}", min(f, UNARY)),
            Globally(f) => write!(out, "G {}", min(f, UNARY)),
            Implies(f, g) => write!(out, "{} -> {}", min(f, OR), min(g, IMPLIES)),
            Or(f, g) => write!(out, "{} | {}", min(f, OR), min(g, AND)),
            And(f, g) => write!(out, "{} & {}", min(f, AND), min(g, TEMPORAL)),
            Until(f, g) | WeakUntil(f, g) | Comp(f, g) => {
                let op = match self {
                    Until(..) => "U",
                    WeakUntil(..) => "W",
                    _ => "(+)",
                };
                let rhs = Child {
                    parens: level(g) < UNARY && !same_temporal_op(self, g),
                    f: g,
                };
                write!(out, "{} {op} {rhs}", min(f, UNARY))
            }
        }
    }
}

/// Renders a formula in concrete syntax; the output reparses to the same tree.
pub fn render(f: &Formula) -> String {
    f.to_string()
}
