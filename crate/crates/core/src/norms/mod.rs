//! Norms at the deontic level: prohibitions (optionally compensable) and
//! permissions, conditioned on state literals and on other permissions.
//!
//! A norm set can be read two ways. [`compile_norms`] turns it into temporal
//! formulas, and [`classify_trace`] judges a trace by putting norms in force
//! state by state. [`paradox_report`] compares the two readings.

mod classify;
mod compile;
mod paradox;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::NormError;
use crate::formula::{Prop, PropositionSet};

pub use classify::{
    classify_trace, deontic_in_force, ComplianceVerdict, InForce, Status, Violation,
};
pub use compile::{
    apply_overrides, compile_norms, conditional, parse_conditionals, parse_overrides, Conditional,
};
pub use paradox::{paradox_report, ParadoxReport};

/// A norm with its identifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Norm {
    pub id: String,
    pub kind: NormKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormKind {
    /// `target` is forbidden while `condition` holds, unless a permission for
    /// the same target is in force. A violation may be made good by `compensation`.
    Prohibition {
        target: Prop,
        condition: Condition,
        compensation: Option<Prop>,
    },
    /// `target` is permitted while `condition` holds.
    Permission { target: Prop, condition: Condition },
}

impl Norm {
    pub fn target(&self) -> &Prop {
        match &self.kind {
            NormKind::Prohibition { target, .. } | NormKind::Permission { target, .. } => target,
        }
    }

    pub fn condition(&self) -> &Condition {
        match &self.kind {
            NormKind::Prohibition { condition, .. } | NormKind::Permission { condition, .. } => {
                condition
            }
        }
    }

    pub fn is_permission(&self) -> bool {
        matches!(self.kind, NormKind::Permission { .. })
    }
}

/// A conjunction of literals over propositions and `permitted(x)` atoms.
/// The empty conjunction is `true`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Condition(pub Vec<CondLiteral>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CondLiteral {
    pub negated: bool,
    pub atom: CondAtom,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CondAtom {
    Prop(Prop),
    Permitted(Prop),
}

impl Condition {
    pub fn always() -> Self {
        Condition(Vec::new())
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_empty()
    }

    /// Targets of `permitted(x)` atoms.
    pub fn permitted_refs(&self) -> impl Iterator<Item = &Prop> {
        self.0.iter().filter_map(|l| match &l.atom {
            CondAtom::Permitted(p) => Some(p),
            CondAtom::Prop(_) => None,
        })
    }

    /// Evaluates the condition given the truth of propositions and the set of
    /// currently permitted targets.
    pub fn holds(&self, prop: impl Fn(&Prop) -> bool, permitted: impl Fn(&Prop) -> bool) -> bool {
        self.0.iter().all(|l| {
            let v = match &l.atom {
                CondAtom::Prop(p) => prop(p),
                CondAtom::Permitted(p) => permitted(p),
            };
            v != l.negated
        })
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|l| {
                let bang = if l.negated { "!" } else { "" };
                match &l.atom {
                    CondAtom::Prop(p) => format!("{bang}{p}"),
                    CondAtom::Permitted(p) => format!("{bang}permitted({p})"),
                }
            })
            .collect();
        f.write_str(&parts.join(" & "))
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            NormKind::Prohibition {
                target,
                condition,
                compensation,
            } => {
                write!(f, "norm {}: forbidden {target}", self.id)?;
                if !condition.is_trivial() {
                    write!(f, " if {condition}")?;
                }
                if let Some(c) = compensation {
                    write!(f, " compensated-by {c}")?;
                }
                Ok(())
            }
            NormKind::Permission { target, condition } => {
                write!(f, "norm {}: permitted {target}", self.id)?;
                if !condition.is_trivial() {
                    write!(f, " if {condition}")?;
                }
                Ok(())
            }
        }
    }
}

/// A validated set of norms plus declared overrides (`winner > loser`).
///
/// Invariants: ids are unique; every override names a permission beating a
/// prohibition of the same target; `permitted(x)` references among permission
/// conditions are acyclic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormSet {
    norms: Vec<Norm>,
    overrides: Vec<(String, String)>,
    /// Permission indices, dependencies first.
    strata: Vec<usize>,
}

impl NormSet {
    pub fn new(norms: Vec<Norm>, overrides: Vec<(String, String)>) -> Result<Self, NormError> {
        let mut ids = BTreeSet::new();
        for n in &norms {
            if !ids.insert(n.id.as_str()) {
                return Err(NormError::DuplicateNorm(n.id.clone()));
            }
        }
        let find = |id: &str| {
            norms
                .iter()
                .find(|n| n.id == id)
                .ok_or_else(|| NormError::UnknownNorm(id.to_string()))
        };
        for (w, l) in &overrides {
            let (winner, loser) = (find(w)?, find(l)?);
            let reason = if !winner.is_permission() {
                Some("the winner must be a permission")
            } else if loser.is_permission() {
                Some("the loser must be a prohibition")
            } else if winner.target() != loser.target() {
                Some("a permission only derogates prohibitions of its own target")
            } else {
                None
            };
            if let Some(reason) = reason {
                return Err(NormError::InvalidOverride {
                    winner: w.clone(),
                    loser: l.clone(),
                    reason: reason.to_string(),
                });
            }
        }
        let strata = stratify(&norms)?;
        Ok(NormSet {
            norms,
            overrides,
            strata,
        })
    }

    pub fn norms(&self) -> &[Norm] {
        &self.norms
    }

    pub fn get(&self, id: &str) -> Option<&Norm> {
        self.norms.iter().find(|n| n.id == id)
    }

    pub fn declared_overrides(&self) -> &[(String, String)] {
        &self.overrides
    }

    /// Overrides as `(winner, loser)` norm indices: the declared ones, or, if
    /// none are declared, every permission over every prohibition of its target.
    pub fn override_pairs(&self) -> Vec<(usize, usize)> {
        let index = |id: &str| self.norms.iter().position(|n| n.id == id).unwrap();
        if !self.overrides.is_empty() {
            return self
                .overrides
                .iter()
                .map(|(w, l)| (index(w), index(l)))
                .collect();
        }
        let mut out = Vec::new();
        for (w, winner) in self.norms.iter().enumerate() {
            for (l, loser) in self.norms.iter().enumerate() {
                if winner.is_permission()
                    && !loser.is_permission()
                    && winner.target() == loser.target()
                {
                    out.push((w, l));
                }
            }
        }
        out
    }

    pub(crate) fn permission_order(&self) -> &[usize] {
        &self.strata
    }

    /// Every proposition the norms mention.
    pub fn props(&self) -> PropositionSet {
        let mut all = BTreeSet::new();
        for n in &self.norms {
            all.insert(n.target().clone());
            if let NormKind::Prohibition {
                compensation: Some(c),
                ..
            } = &n.kind
            {
                all.insert(c.clone());
            }
            for l in &n.condition().0 {
                match &l.atom {
                    CondAtom::Prop(p) | CondAtom::Permitted(p) => all.insert(p.clone()),
                };
            }
        }
        PropositionSet::from_props(all)
    }
}

impl fmt::Display for NormSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in &self.norms {
            writeln!(f, "{n}")?;
        }
        for (w, l) in &self.overrides {
            writeln!(f, "override {w} > {l}")?;
        }
        Ok(())
    }
}

/// Orders permissions so that every permission comes after all permissions
/// whose targets its condition mentions.
fn stratify(norms: &[Norm]) -> Result<Vec<usize>, NormError> {
    let perms: Vec<usize> = (0..norms.len())
        .filter(|&i| norms[i].is_permission())
        .collect();
    let mut by_target: BTreeMap<&Prop, Vec<usize>> = BTreeMap::new();
    for &i in &perms {
        by_target.entry(norms[i].target()).or_default().push(i);
    }

    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Fresh,
        Active,
        Done,
    }
    let mut marks = vec![Mark::Fresh; norms.len()];
    let mut order = Vec::new();

    fn visit(
        i: usize,
        norms: &[Norm],
        by_target: &BTreeMap<&Prop, Vec<usize>>,
        marks: &mut [Mark],
        stack: &mut Vec<usize>,
        order: &mut Vec<usize>,
    ) -> Result<(), NormError> {
        match marks[i] {
            Mark::Done => return Ok(()),
            Mark::Active => {
                let from = stack.iter().position(|&s| s == i).unwrap_or(0);
                let cycle = stack[from..].iter().map(|&s| norms[s].id.clone()).collect();
                return Err(NormError::NonStratified(cycle));
            }
            Mark::Fresh => {}
        }
        marks[i] = Mark::Active;
        stack.push(i);
        for dep in norms[i].condition().permitted_refs() {
            for &j in by_target.get(dep).map(Vec::as_slice).unwrap_or(&[]) {
                visit(j, norms, by_target, marks, stack, order)?;
            }
        }
        stack.pop();
        marks[i] = Mark::Done;
        order.push(i);
        Ok(())
    }

    for &i in &perms {
        visit(
            i,
            norms,
            &by_target,
            &mut marks,
            &mut Vec::new(),
            &mut order,
        )?;
    }
    Ok(order)
}

/// Parses the norm file format:
///
/// ```text
/// norm prohA: forbidden A compensated-by B
/// norm permA: permitted A if C
/// norm permD: permitted D if permitted(A)
/// override permA > prohA
/// ```
///
/// Conditions after `if` are `&`-separated literals `X`, `!X`,
/// `permitted(X)` or `!permitted(X)`. `#` starts a comment.
pub fn parse_norms(text: &str) -> Result<NormSet, NormError> {
    let mut norms = Vec::new();
    let mut overrides = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |message: String| NormError::Parse { line, message };
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(rest) = body.strip_prefix("override ") {
            let Some((w, l)) = rest.split_once('>') else {
                return Err(err("expected `override WINNER > LOSER`".into()));
            };
            overrides.push((w.trim().to_string(), l.trim().to_string()));
        } else if let Some(rest) = body.strip_prefix("norm ") {
            let Some((id, body)) = rest.split_once(':') else {
                return Err(err("expected `norm ID: ...`".into()));
            };
            let id = id.trim();
            if !crate::formula::is_identifier(id) {
                return Err(err(format!("invalid norm id {id:?}")));
            }
            let kind = parse_norm_body(body.trim()).map_err(err)?;
            norms.push(Norm {
                id: id.to_string(),
                kind,
            });
        } else {
            return Err(err(format!("unknown directive in {body:?}")));
        }
    }
    NormSet::new(norms, overrides)
}

fn prop(name: &str) -> Result<Prop, String> {
    Prop::new(name).map_err(|e| e.to_string())
}

fn parse_norm_body(text: &str) -> Result<NormKind, String> {
    let mut words = text.split_whitespace().peekable();
    let modality = words.next().ok_or("missing `forbidden` or `permitted`")?;
    let target = prop(words.next().ok_or("missing target proposition")?)?;
    let mut condition = Condition::always();
    let mut compensation = None;
    let mut seen_if = false;
    while let Some(w) = words.next() {
        match w {
            "if" if !seen_if => {
                seen_if = true;
                let mut cond_words = Vec::new();
                while let Some(&next) = words.peek() {
                    if next == "compensated-by" {
                        break;
                    }
                    cond_words.push(next);
                    words.next();
                }
                condition = parse_condition(&cond_words.join(" "))?;
            }
            "compensated-by" if compensation.is_none() => {
                compensation = Some(prop(words.next().ok_or("missing compensation")?)?);
            }
            other => return Err(format!("unexpected {other:?}")),
        }
    }
    match modality {
        "forbidden" => Ok(NormKind::Prohibition {
            target,
            condition,
            compensation,
        }),
        "permitted" if compensation.is_some() => {
            Err("only prohibitions can carry a compensation".into())
        }
        "permitted" => Ok(NormKind::Permission { target, condition }),
        other => Err(format!(
            "expected `forbidden` or `permitted`, found {other:?}"
        )),
    }
}

fn parse_condition(text: &str) -> Result<Condition, String> {
    if text.trim().is_empty() {
        return Err("empty condition after `if`".into());
    }
    let mut out = Vec::new();
    for item in text.split('&') {
        let item = item.trim();
        let (negated, item) = match item.strip_prefix('!') {
            Some(rest) => (true, rest.trim()),
            None => (false, item),
        };
        let atom = if let Some(inner) = item
            .strip_prefix("permitted(")
            .and_then(|r| r.strip_suffix(')'))
        {
            CondAtom::Permitted(prop(inner.trim())?)
        } else {
            CondAtom::Prop(prop(item)?)
        };
        out.push(CondLiteral { negated, atom });
    }
    Ok(Condition(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::PRIVACY_NORMS;

    #[test]
    fn parses_privacy_norms() {
        let ns = parse_norms(PRIVACY_NORMS).unwrap();
        assert_eq!(ns.norms().len(), 4);
        assert_eq!(ns.props().to_string(), "{A,B,C,D}");
        assert_eq!(
            ns.to_string(),
            "norm prohA: forbidden A compensated-by B\n\
             norm permA: permitted A if C\n\
             norm prohD: forbidden D\n\
             norm permD: permitted D if permitted(A)\n\
             override permA > prohA\n\
             override permD > prohD\n"
        );
        assert_eq!(parse_norms(&ns.to_string()).unwrap(), ns);
        // permA must be settled before permD
        let order: Vec<&str> = ns
            .permission_order()
            .iter()
            .map(|&i| ns.norms()[i].id.as_str())
            .collect();
        assert_eq!(order, vec!["permA", "permD"]);
    }

    #[test]
    fn conditions_and_clause_order() {
        let ns = parse_norms(
            "norm p: forbidden A compensated-by B if !C & permitted(D)\nnorm q: permitted D\n",
        )
        .unwrap();
        match &ns.norms()[0].kind {
            NormKind::Prohibition {
                condition,
                compensation,
                ..
            } => {
                assert_eq!(condition.to_string(), "!C & permitted(D)");
                assert_eq!(compensation.as_ref().unwrap().as_str(), "B");
            }
            _ => panic!(),
        }
    }

    #[test]
    fn rejects_cycles() {
        let err = parse_norms(
            "norm p: permitted A if permitted(B)\nnorm q: permitted B if permitted(A)\n",
        )
        .unwrap_err();
        assert!(matches!(err, NormError::NonStratified(c) if c.len() == 2));
        assert!(matches!(
            parse_norms("norm p: permitted A if permitted(A)\n"),
            Err(NormError::NonStratified(_))
        ));
    }

    #[test]
    fn rejects_bad_overrides() {
        let base = "norm p: forbidden A\nnorm q: permitted A\nnorm r: permitted B\n";
        assert!(parse_norms(&format!("{base}override q > p\n")).is_ok());
        for o in ["p > q", "r > p", "q > r", "q > zz"] {
            assert!(
                parse_norms(&format!("{base}override {o}\n")).is_err(),
                "{o}"
            );
        }
    }

    #[test]
    fn parse_errors() {
        for (text, line) in [
            ("norm p forbidden A", 1),
            ("\nnorm p: obliged A", 2),
            ("norm p: permitted A compensated-by B", 1),
            ("norm p: forbidden A if", 1),
            ("norm p: forbidden A if C &", 1),
            ("norm p: forbidden", 1),
            ("frobnicate", 1),
        ] {
            match parse_norms(text) {
                Err(NormError::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
        assert!(matches!(
            parse_norms("norm p: forbidden A\nnorm p: forbidden B"),
            Err(NormError::DuplicateNorm(_))
        ));
    }

    #[test]
    fn derived_overrides_match_targets() {
        let ns =
            parse_norms("norm p: forbidden A\nnorm q: permitted A if C\nnorm r: forbidden B\n")
                .unwrap();
        assert_eq!(ns.override_pairs(), vec![(1, 0)]);
    }
}
