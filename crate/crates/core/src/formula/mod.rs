//! LTL formulas extended with the compensation operator `(+)`.
//!
//! The concrete syntax is ASCII: `! & | ->`, unary `X F G`, binary infix
//! `U W (+)`, and the constants `true` / `false`. See [`parse_formula`] for the
//! grammar and [`Formula`]'s `Display` impl for the minimal-parentheses printer.

mod parse;
mod render;

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

pub use parse::{parse_formula, parse_formula_list};
pub use render::render;

use crate::error::FormulaError;

/// Words that lex as operators or constants and can never name a proposition.
pub const RESERVED: [&str; 7] = ["X", "F", "G", "U", "W", "true", "false"];

/// An atomic proposition name, `[A-Za-z][A-Za-z0-9_]*` minus the reserved words.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Prop(Arc<str>);

impl Prop {
    pub fn new(name: &str) -> Result<Self, FormulaError> {
        if is_identifier(name) && !RESERVED.contains(&name) {
            Ok(Prop(Arc::from(name)))
        } else {
            Err(FormulaError::InvalidProposition(name.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => chars.all(|c| c.is_ascii_alphanumeric() || c == '_'),
        _ => false,
    }
}

/// Abstract syntax of LTL with `Comp` standing for the compensation operator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Prop),
    True,
    False,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Finally(Box<Formula>),
    Globally(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    WeakUntil(Box<Formula>, Box<Formula>),
    /// `f (+) g`: `f` is maintained throughout, or some violation of `f` is
    /// followed (at the same instant or later) by `g`.
    Comp(Box<Formula>, Box<Formula>),
}

#[allow(clippy::should_implement_trait)]
impl Formula {
    /// Builds an atom, panicking on an invalid name. Intended for literals in
    /// code; use [`Prop::new`] for untrusted input.
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Prop::new(name).expect("invalid proposition name"))
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(f: Formula, g: Formula) -> Formula {
        Formula::And(Box::new(f), Box::new(g))
    }

    pub fn or(f: Formula, g: Formula) -> Formula {
        Formula::Or(Box::new(f), Box::new(g))
    }

    pub fn implies(f: Formula, g: Formula) -> Formula {
        Formula::Implies(Box::new(f), Box::new(g))
    }

    pub fn next(f: Formula) -> Formula {
        Formula::Next(Box::new(f))
    }

    pub fn finally(f: Formula) -> Formula {
        Formula::Finally(Box::new(f))
    }

    pub fn globally(f: Formula) -> Formula {
        Formula::Globally(Box::new(f))
    }

    pub fn until(f: Formula, g: Formula) -> Formula {
        Formula::Until(Box::new(f), Box::new(g))
    }

    pub fn weak_until(f: Formula, g: Formula) -> Formula {
        Formula::WeakUntil(Box::new(f), Box::new(g))
    }

    pub fn comp(f: Formula, g: Formula) -> Formula {
        Formula::Comp(Box::new(f), Box::new(g))
    }

    /// Left-nested conjunction of all formulas (as `a & b & c` parses),
    /// `true` when empty.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(fs: I) -> Formula {
        let mut fs = fs.into_iter();
        match fs.next() {
            None => Formula::True,
            Some(first) => fs.fold(first, Formula::and),
        }
    }

    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            Atom(_) | True | False => vec![],
            Not(f) | Next(f) | Finally(f) | Globally(f) => vec![f],
            And(f, g) | Or(f, g) | Implies(f, g) | Until(f, g) | WeakUntil(f, g) | Comp(f, g) => {
                vec![f, g]
            }
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self
            .children()
            .iter()
            .map(|c| c.node_count())
            .sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Every proposition occurring in the formula.
    pub fn atoms(&self) -> PropositionSet {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        PropositionSet::from_props(out)
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Prop>) {
        if let Formula::Atom(p) = self {
            out.insert(p.clone());
        }
        for c in self.children() {
            c.collect_atoms(out);
        }
    }

    /// Distinct subformulas in post-order: children before parents, `self` last.
    pub fn subformulas(&self) -> Vec<Formula> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        self.collect_subformulas(&mut seen, &mut out);
        out
    }

    fn collect_subformulas<'a>(&'a self, seen: &mut HashSet<&'a Formula>, out: &mut Vec<Formula>) {
        if seen.contains(self) {
            return;
        }
        for c in self.children() {
            c.collect_subformulas(seen, out);
        }
        seen.insert(self);
        out.push(self.clone());
    }

    /// Rewrites into the core fragment {atoms, constants, `!`, `&`, `|`, `->`, `X`, `U`}.
    ///
    /// ```text
    /// F p     =>  true U p
    /// G p     =>  !(true U !p)
    /// p W q   =>  (p U q) | !(true U !p)
    /// p (+) q =>  !(true U !p) | (true U (!p & (true U q)))
    /// ```
    pub fn expand_derived(&self) -> Formula {
        use Formula::*;
        let eventually = |f: Formula| Formula::until(True, f);
        let always = |f: Formula| Formula::not(Formula::until(True, Formula::not(f)));
        match self {
            Atom(_) | True | False => self.clone(),
            Not(f) => Formula::not(f.expand_derived()),
            And(f, g) => Formula::and(f.expand_derived(), g.expand_derived()),
            Or(f, g) => Formula::or(f.expand_derived(), g.expand_derived()),
            Implies(f, g) => Formula::implies(f.expand_derived(), g.expand_derived()),
            Next(f) => Formula::next(f.expand_derived()),
            Until(f, g) => Formula::until(f.expand_derived(), g.expand_derived()),
            Finally(f) => eventually(f.expand_derived()),
            Globally(f) => always(f.expand_derived()),
            WeakUntil(f, g) => {
                let (f, g) = (f.expand_derived(), g.expand_derived());
                Formula::or(Formula::until(f.clone(), g), always(f))
            }
            Comp(f, g) => {
                let (f, g) = (f.expand_derived(), g.expand_derived());
                Formula::or(
                    always(f.clone()),
                    eventually(Formula::and(Formula::not(f), eventually(g))),
                )
            }
        }
    }

    /// True iff the formula only uses the operators produced by [`Formula::expand_derived`].
    pub fn is_core(&self) -> bool {
        !matches!(
            self,
            Formula::Finally(_) | Formula::Globally(_) | Formula::WeakUntil(..) | Formula::Comp(..)
        ) && self.children().iter().all(|c| c.is_core())
    }
}

impl std::str::FromStr for Formula {
    type Err = FormulaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

/// Ordered, duplicate-free set of propositions. Iteration is lexicographic and
/// the position of a proposition is its bit in a [`crate::trace::Valuation`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct PropositionSet {
    names: Vec<Prop>,
}

impl PropositionSet {
    pub const MAX_PROPS: usize = 64;

    pub fn new<I, S>(names: I) -> Result<Self, FormulaError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let props = names
            .into_iter()
            .map(|n| Prop::new(n.as_ref()))
            .collect::<Result<BTreeSet<_>, _>>()?;
        if props.len() > Self::MAX_PROPS {
            return Err(FormulaError::TooManyPropositions(props.len()));
        }
        Ok(Self::from_props(props))
    }

    pub(crate) fn from_props(props: BTreeSet<Prop>) -> Self {
        PropositionSet {
            names: props.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Prop> {
        self.names.iter()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.binary_search_by(|p| p.as_str().cmp(name)).ok()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    pub fn get(&self, index: usize) -> Option<&Prop> {
        self.names.get(index)
    }

    pub fn union(&self, other: &PropositionSet) -> PropositionSet {
        let all: BTreeSet<Prop> = self
            .names
            .iter()
            .chain(other.names.iter())
            .cloned()
            .collect();
        Self::from_props(all)
    }

    pub fn is_subset(&self, other: &PropositionSet) -> bool {
        self.names.iter().all(|p| other.contains(p.as_str()))
    }
}

impl fmt::Display for PropositionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.names.iter().map(|p| p.as_str()).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Formula {
        Formula::atom("a")
    }
    fn b() -> Formula {
        Formula::atom("b")
    }

    #[test]
    fn subformulas_post_order() {
        assert_eq!(a().subformulas(), vec![a()]);
        let u = Formula::until(a(), b());
        assert_eq!(u.subformulas(), vec![a(), b(), u.clone()]);
        let c = Formula::comp(Formula::not(a()), b());
        assert_eq!(
            c.subformulas(),
            vec![a(), Formula::not(a()), b(), c.clone()]
        );
    }

    #[test]
    fn subformulas_deduplicate_shared_children() {
        let f = Formula::and(
            Formula::finally(a()),
            Formula::globally(Formula::finally(a())),
        );
        let subs = f.subformulas();
        assert_eq!(subs.len(), 4);
        assert!(subs.len() <= f.node_count());
        assert_eq!(subs.last(), Some(&f));
    }

    #[test]
    fn expansion_rules() {
        assert_eq!(
            Formula::finally(a()).expand_derived(),
            Formula::until(Formula::True, a())
        );
        assert_eq!(
            Formula::globally(a()).expand_derived(),
            Formula::not(Formula::until(Formula::True, Formula::not(a())))
        );
        let c = Formula::comp(Formula::not(a()), b()).expand_derived();
        assert!(c.is_core());
        assert_eq!(c.to_string(), "!(true U !!a) | true U (!!a & true U b)");
    }

    #[test]
    fn proposition_names() {
        assert!(Prop::new("A").is_ok());
        assert!(Prop::new("x_1").is_ok());
        for bad in ["", "1a", "_a", "a-b", "F", "true", "U"] {
            assert!(Prop::new(bad).is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn proposition_set_is_sorted_and_deduplicated() {
        let ps = PropositionSet::new(["D", "A", "C", "A"]).unwrap();
        assert_eq!(ps.to_string(), "{A,C,D}");
        assert_eq!(ps.index_of("C"), Some(1));
        assert_eq!(ps.index_of("B"), None);
    }

    #[test]
    fn conjunction_of_empty_is_true() {
        assert_eq!(Formula::conjunction(vec![]), Formula::True);
        assert_eq!(
            Formula::conjunction(vec![a(), b(), a()]),
            Formula::and(Formula::and(a(), b()), a())
        );
    }
}
