//! Translation of norms into temporal formulas, and the overrides rewrite
//! that turns a strong permission into an exception of the prohibition it
//! derogates.
//!
//! Prohibitions become maintenance obligations (`G !t`, or `!t (+) c` when
//! compensable) and permissions become `F t`. A `permitted(x)` condition is
//! read through the same duality as `F x`.

use std::fmt;

use crate::error::{FormulaError, NormError};
use crate::formula::{parse_formula, Formula};

use super::{CondAtom, Condition, NormKind, NormSet};

/// `antecedent -> consequent`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Conditional {
    pub antecedent: Formula,
    pub consequent: Formula,
}

impl Conditional {
    pub fn new(antecedent: Formula, consequent: Formula) -> Self {
        Conditional {
            antecedent,
            consequent,
        }
    }

    /// Reads a top-level implication as a conditional; anything else becomes
    /// `true -> f`.
    pub fn from_formula(f: Formula) -> Self {
        match f {
            Formula::Implies(a, c) => Conditional::new(*a, *c),
            other => Conditional::new(Formula::True, other),
        }
    }

    /// The formula this conditional stands for; an unconditioned one is just
    /// its consequent.
    pub fn to_formula(&self) -> Formula {
        match self.antecedent {
            Formula::True => self.consequent.clone(),
            _ => Formula::implies(self.antecedent.clone(), self.consequent.clone()),
        }
    }

    /// Top-level conjuncts of the antecedent.
    pub fn antecedent_conjuncts(&self) -> Vec<&Formula> {
        conjuncts(&self.antecedent)
    }
}

impl fmt::Display for Conditional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            Formula::implies(self.antecedent.clone(), self.consequent.clone())
        )
    }
}

fn conjuncts(f: &Formula) -> Vec<&Formula> {
    match f {
        Formula::And(a, b) => {
            let mut out = conjuncts(a);
            out.extend(conjuncts(b));
            out
        }
        other => vec![other],
    }
}

/// Conjunction that drops `true` conjuncts.
fn conjoin(parts: Vec<Formula>) -> Formula {
    Formula::conjunction(parts.into_iter().filter(|p| *p != Formula::True))
}

/// Adds the negated antecedent of every overriding conditional to the
/// antecedent of the conditional it overrides. `overrides` holds
/// `(winner, loser)` indices; a loser's winners are applied in index order.
/// Winners keep their original form. `true` conjuncts are dropped from
/// rewritten antecedents.
pub fn apply_overrides(
    cs: &[Conditional],
    overrides: &[(usize, usize)],
) -> Result<Vec<Conditional>, NormError> {
    for &(w, l) in overrides {
        for index in [w, l] {
            if index >= cs.len() {
                return Err(NormError::IndexOutOfRange {
                    index,
                    len: cs.len(),
                });
            }
        }
    }
    let mut out = cs.to_vec();
    for (l, loser) in cs.iter().enumerate() {
        let mut winners: Vec<usize> = overrides
            .iter()
            .filter(|&&(_, lo)| lo == l)
            .map(|&(w, _)| w)
            .collect();
        if winners.is_empty() {
            continue;
        }
        winners.sort_unstable();
        winners.dedup();
        let mut parts = vec![loser.antecedent.clone()];
        parts.extend(
            winners
                .iter()
                .map(|&w| Formula::not(cs[w].antecedent.clone())),
        );
        out[l].antecedent = conjoin(parts);
    }
    Ok(out)
}

/// Rewrites `!F x` into `G !x` throughout a formula.
fn dualize(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        Not(inner) => match inner.as_ref() {
            Finally(x) => Formula::globally(Formula::not(dualize(x))),
            other => Formula::not(dualize(other)),
        },
        And(a, b) => Formula::and(dualize(a), dualize(b)),
        Or(a, b) => Formula::or(dualize(a), dualize(b)),
        _ => f.clone(),
    }
}

fn compile_condition(ns: &NormSet, norm_id: &str, cond: &Condition) -> Result<Formula, NormError> {
    let unsupported = |reason: String| NormError::UnsupportedConditionShape {
        norm: norm_id.to_string(),
        reason,
    };
    let mut parts = Vec::new();
    for lit in &cond.0 {
        let f = match &lit.atom {
            CondAtom::Prop(p) => Formula::Atom(p.clone()),
            CondAtom::Permitted(p) => {
                if lit.negated {
                    return Err(unsupported(format!("negated permitted({p})")));
                }
                let granted = ns
                    .norms()
                    .iter()
                    .any(|n| n.is_permission() && n.target() == p);
                if !granted {
                    return Err(unsupported(format!("no permission grants {p}")));
                }
                Formula::finally(Formula::Atom(p.clone()))
            }
        };
        parts.push(if lit.negated { Formula::not(f) } else { f });
    }
    Ok(conjoin(parts))
}

/// Compiles a norm set into one formula per norm, in norm order.
///
/// Each norm first becomes a conditional:
///
/// ```text
/// forbidden t if c compensated-by b   =>  c -> (!t (+) b)
/// forbidden t if c                    =>  c -> G !t
/// permitted t if c                    =>  c -> F t
/// ```
///
/// where literals compile to themselves and `permitted(x)` to `F x`. The
/// norm set's overrides are then applied with [`apply_overrides`], and
/// negated eventualities in antecedents are turned into `G !x`.
pub fn compile_norms(ns: &NormSet) -> Result<Vec<Formula>, NormError> {
    let mut cs = Vec::new();
    for n in ns.norms() {
        let antecedent = compile_condition(ns, &n.id, n.condition())?;
        let consequent = match &n.kind {
            NormKind::Prohibition {
                target,
                compensation: Some(c),
                ..
            } => Formula::comp(
                Formula::not(Formula::Atom(target.clone())),
                Formula::Atom(c.clone()),
            ),
            NormKind::Prohibition { target, .. } => {
                Formula::globally(Formula::not(Formula::Atom(target.clone())))
            }
            NormKind::Permission { target, .. } => Formula::finally(Formula::Atom(target.clone())),
        };
        cs.push(Conditional::new(antecedent, consequent));
    }
    let rewritten = apply_overrides(&cs, &ns.override_pairs())?;
    Ok(rewritten
        .into_iter()
        .map(|c| Conditional::new(dualize(&c.antecedent), c.consequent).to_formula())
        .collect())
}

/// One conditional per non-blank line (`#` comments), each a formula whose
/// top-level implication, if any, splits antecedent from consequent.
pub fn parse_conditionals(text: &str) -> Result<Vec<Conditional>, FormulaError> {
    Ok(crate::formula::parse_formula_list(text)?
        .into_iter()
        .map(Conditional::from_formula)
        .collect())
}

/// One `WINNER > LOSER` pair per line, as 1-based conditional numbers.
/// Returns 0-based pairs.
pub fn parse_overrides(text: &str) -> Result<Vec<(usize, usize)>, NormError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let err = || NormError::Parse {
            line,
            message: format!("expected `WINNER > LOSER` with 1-based numbers, found {body:?}"),
        };
        let (w, l) = body.split_once('>').ok_or_else(err)?;
        let w: usize = w.trim().parse().map_err(|_| err())?;
        let l: usize = l.trim().parse().map_err(|_| err())?;
        if w == 0 || l == 0 {
            return Err(err());
        }
        out.push((w - 1, l - 1));
    }
    Ok(out)
}

/// Convenience for tests and examples: parses `text` as a conditional.
pub fn conditional(text: &str) -> Result<Conditional, FormulaError> {
    parse_formula(text).map(Conditional::from_formula)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{NAIVE_CONDITIONALS, NAIVE_OVERRIDES, PRIVACY_NORMS};
    use crate::norms::parse_norms;

    fn c(text: &str) -> Conditional {
        conditional(text).unwrap()
    }

    fn rendered(fs: &[Formula]) -> Vec<String> {
        fs.iter().map(|f| f.to_string()).collect()
    }

    #[test]
    fn privacy_norms_compile_to_the_four_formulas() {
        let ns = parse_norms(PRIVACY_NORMS).unwrap();
        let fs = compile_norms(&ns).unwrap();
        assert_eq!(
            rendered(&fs),
            vec!["!C -> !A (+) B", "C -> F A", "G !A -> G !D", "F A -> F D"]
        );
        let expected: Vec<Formula> = ["!C -> (!A (+) B)", "C -> F A", "G !A -> G !D", "F A -> F D"]
            .iter()
            .map(|s| parse_formula(s).unwrap())
            .collect();
        assert_eq!(fs, expected);
    }

    #[test]
    fn single_norms() {
        let ns = parse_norms("norm p: forbidden A\n").unwrap();
        assert_eq!(rendered(&compile_norms(&ns).unwrap()), vec!["G !A"]);
        let ns = parse_norms("norm p: permitted A if C\n").unwrap();
        assert_eq!(rendered(&compile_norms(&ns).unwrap()), vec!["C -> F A"]);
        let ns = parse_norms("norm p: forbidden A if !C & D compensated-by B\n").unwrap();
        assert_eq!(
            rendered(&compile_norms(&ns).unwrap()),
            vec!["!C & D -> !A (+) B"]
        );
    }

    #[test]
    fn without_declared_overrides_targets_decide() {
        let ns = parse_norms("norm p: forbidden A\nnorm q: permitted A if C\n").unwrap();
        assert_eq!(
            rendered(&compile_norms(&ns).unwrap()),
            vec!["!C -> G !A", "C -> F A"]
        );
    }

    #[test]
    fn unsupported_shapes() {
        let ns =
            parse_norms("norm p: permitted D if !permitted(A)\nnorm q: permitted A\n").unwrap();
        assert!(matches!(
            compile_norms(&ns),
            Err(NormError::UnsupportedConditionShape { .. })
        ));
        let ns = parse_norms("norm p: permitted D if permitted(A)\n").unwrap();
        assert!(matches!(
            compile_norms(&ns),
            Err(NormError::UnsupportedConditionShape { .. })
        ));
    }

    #[test]
    fn court_order_overrides_prohibition() {
        let out = apply_overrides(&[c("G !A"), c("C -> F A")], &[(1, 0)]).unwrap();
        assert_eq!(out[0], c("!C -> G !A"));
        assert_eq!(out[1], c("C -> F A"));
    }

    #[test]
    fn empty_overrides_are_identity() {
        let cs = vec![c("G !A"), c("C -> F A")];
        assert_eq!(apply_overrides(&cs, &[]).unwrap(), cs);
    }

    #[test]
    fn permission_propagation_override() {
        let out = apply_overrides(&[c("G !D"), c("F A -> F D")], &[(1, 0)]).unwrap();
        assert_eq!(out[0], c("!F A -> G !D"));
    }

    #[test]
    fn several_winners_in_index_order() {
        let cs = vec![c("p -> G !A"), c("q -> F A"), c("r -> F A")];
        let out = apply_overrides(&cs, &[(2, 0), (1, 0)]).unwrap();
        assert_eq!(out[0], c("p & !q & !r -> G !A"));
        let conj = out[0].antecedent_conjuncts();
        assert!(conj.contains(&&Formula::not(Formula::atom("q"))));
        assert!(conj.contains(&&Formula::not(Formula::atom("r"))));
    }

    #[test]
    fn out_of_range_index() {
        assert!(matches!(
            apply_overrides(&[c("G !A")], &[(1, 0)]),
            Err(NormError::IndexOutOfRange { index: 1, len: 1 })
        ));
    }

    #[test]
    fn naive_set_rewrite() {
        let cs = parse_conditionals(NAIVE_CONDITIONALS).unwrap();
        let ov = parse_overrides(NAIVE_OVERRIDES).unwrap();
        assert_eq!(ov, vec![(2, 0), (4, 3)]);
        let out = apply_overrides(&cs, &ov).unwrap();
        let text: Vec<String> = out.iter().map(|c| c.to_formula().to_string()).collect();
        assert_eq!(
            text,
            vec![
                "!C -> G !A",
                "G !A & A -> G B",
                "C -> F A",
                "!F A -> G !D",
                "F A -> F D"
            ]
        );
    }

    #[test]
    fn override_file_errors() {
        assert!(parse_overrides("1 > x").is_err());
        assert!(parse_overrides("0 > 1").is_err());
        assert!(parse_overrides("# nothing\n\n").unwrap().is_empty());
    }
}
