//! Shared oracles, generators and property bodies for the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use normcheck::eval::label;
use normcheck::norms::{deontic_in_force, InForce};
use normcheck::oracle::reference_status;
use normcheck::{
    brute_force_equiv, classify_trace, eval_comp_direct, eval_on_trace, parse_formula, parse_norms,
    Formula, LassoTrace, NormSet, PropositionSet, Status, Valuation,
};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

/// Truth of `f` at position `i` by direct recursion on the semantics.
///
/// Every suffix of a lasso is one of its `len()` distinguished suffixes, so an
/// eventuality that holds at all is reached within `len()` steps from `i`.
pub fn naive_eval(f: &Formula, t: &LassoTrace, i: usize) -> bool {
    let n = t.len();
    let ev = |g: &Formula, k: usize| naive_eval(g, t, k);
    match f {
        Formula::Atom(p) => t.holds(p.as_str(), i).expect("atom declared"),
        Formula::True => true,
        Formula::False => false,
        Formula::Not(a) => !ev(a, i),
        Formula::And(a, b) => ev(a, i) && ev(b, i),
        Formula::Or(a, b) => ev(a, i) || ev(b, i),
        Formula::Implies(a, b) => !ev(a, i) || ev(b, i),
        Formula::Next(a) => ev(a, i + 1),
        Formula::Finally(a) => (i..i + n).any(|k| ev(a, k)),
        Formula::Globally(a) => (i..i + n).all(|k| ev(a, k)),
        Formula::Until(a, b) => until(t, i, a, b),
        Formula::WeakUntil(a, b) => until(t, i, a, b) || (i..i + n).all(|k| ev(a, k)),
        Formula::Comp(a, b) => {
            (i..i + n).all(|k| ev(a, k))
                || (i..i + n).any(|j| !ev(a, j) && (j..j + n).any(|k| ev(b, k)))
        }
    }
}

fn until(t: &LassoTrace, i: usize, a: &Formula, b: &Formula) -> bool {
    match (i..i + t.len()).find(|&k| naive_eval(b, t, k)) {
        Some(k) => (i..k).all(|j| naive_eval(a, t, j)),
        None => false,
    }
}

pub const AB: &[&str] = &["a", "b"];
pub const ABC: &[&str] = &["a", "b", "c"];
pub const ABCD: &[&str] = &["A", "B", "C", "D"];

pub fn props(names: &[&str]) -> Arc<PropositionSet> {
    Arc::new(PropositionSet::new(names.iter().copied()).unwrap())
}

/// Formulas over `names` with at most `levels` operator levels above the leaves.
pub fn arb_formula(names: &'static [&'static str], levels: u32) -> BoxedStrategy<Formula> {
    let leaf = prop_oneof![
        6 => proptest::sample::select(names).prop_map(Formula::atom),
        1 => Just(Formula::True),
        1 => Just(Formula::False),
    ];
    leaf.prop_recursive(levels, 48, 2, |inner| {
        let pair = (inner.clone(), inner.clone());
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            inner.clone().prop_map(Formula::next),
            inner.clone().prop_map(Formula::finally),
            inner.clone().prop_map(Formula::globally),
            pair.clone().prop_map(|(a, b)| Formula::and(a, b)),
            pair.clone().prop_map(|(a, b)| Formula::or(a, b)),
            pair.clone().prop_map(|(a, b)| Formula::implies(a, b)),
            pair.clone().prop_map(|(a, b)| Formula::until(a, b)),
            pair.clone().prop_map(|(a, b)| Formula::weak_until(a, b)),
            pair.prop_map(|(a, b)| Formula::comp(a, b)),
        ]
    })
    .boxed()
}

pub fn arb_trace(
    names: &'static [&'static str],
    max_prefix: usize,
    max_loop: usize,
) -> BoxedStrategy<LassoTrace> {
    let ps = props(names);
    let top = 1u64 << names.len();
    (
        proptest::collection::vec(0..top, 0..=max_prefix),
        proptest::collection::vec(0..top, 1..=max_loop),
    )
        .prop_map(move |(p, l)| {
            LassoTrace::new(
                ps.clone(),
                p.into_iter().map(Valuation).collect(),
                l.into_iter().map(Valuation).collect(),
            )
            .unwrap()
        })
        .boxed()
}

/// Norm sets over {A,B,C,D} with conditions on literals and permissions.
pub fn arb_norms() -> BoxedStrategy<NormSet> {
    arb_norms_with(ABCD, ABCD)
}

/// Norm sets whose targets and conditions use `atoms` and whose
/// compensations use `comps`.
pub fn arb_norms_with(
    atoms: &'static [&'static str],
    comps: &'static [&'static str],
) -> BoxedStrategy<NormSet> {
    let lit = (
        any::<bool>(),
        any::<bool>(),
        proptest::sample::select(atoms),
    )
        .prop_map(|(neg, perm, p)| {
            let bang = if neg { "!" } else { "" };
            if perm {
                format!("{bang}permitted({p})")
            } else {
                format!("{bang}{p}")
            }
        });
    let norm = (
        any::<bool>(),
        proptest::sample::select(atoms),
        proptest::collection::vec(lit, 0..=2),
        proptest::option::of(proptest::sample::select(comps)),
    );
    proptest::collection::vec(norm, 1..=5)
        .prop_filter_map("not stratified", |norms| {
            let mut text = String::new();
            for (i, (perm, target, cond, comp)) in norms.into_iter().enumerate() {
                let kind = if perm { "permitted" } else { "forbidden" };
                text.push_str(&format!("norm n{i}: {kind} {target}"));
                if !cond.is_empty() {
                    text.push_str(&format!(" if {}", cond.join(" & ")));
                }
                if let (false, Some(c)) = (perm, comp) {
                    text.push_str(&format!(" compensated-by {c}"));
                }
                text.push('\n');
            }
            parse_norms(&text).ok()
        })
        .boxed()
}

pub fn privacy_norms() -> NormSet {
    parse_norms(normcheck::fixtures::PRIVACY_NORMS).unwrap()
}

// Property bodies, shared by the proptest suites and the acceptance runner.

pub fn prop_round_trip(f: &Formula) -> Result<(), TestCaseError> {
    prop_assert!(f.depth() <= 6);
    let text = f.to_string();
    let back = parse_formula(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
    prop_assert_eq!(&back, f, "rendered as {}", text);
    Ok(())
}

/// Expansion agrees with the original on every trace with prefix <= 3 and
/// loop <= 2 over {a, b}.
pub fn prop_expansion_preserves(f: &Formula) -> Result<(), TestCaseError> {
    prop_assert!(f.depth() <= 4);
    let e = f.expand_derived();
    prop_assert!(e.is_core());
    let r = brute_force_equiv(f, &e, &props(AB), 3, 2).unwrap();
    prop_assert!(r.equivalent, "{} vs {} on {:?}", f, e, r.counterexample);
    Ok(())
}

pub fn prop_naive_agreement(f: &Formula, t: &LassoTrace) -> Result<(), TestCaseError> {
    let fast = eval_on_trace(f, t).unwrap();
    prop_assert_eq!(fast, naive_eval(f, t, 0), "{} on {}", f, t);
    Ok(())
}

pub fn prop_periodicity(f: &Formula, t: &LassoTrace) -> Result<(), TestCaseError> {
    let lab = label(f, t).unwrap();
    let unrolled = label(f, &t.unrolled(1)).unwrap();
    for sub in lab.subformulas() {
        for i in t.prefix_len()..t.len() {
            let here = lab.value(sub, i).unwrap();
            prop_assert_eq!(
                here,
                unrolled.value(sub, i + t.loop_len()).unwrap(),
                "{} at {}",
                sub,
                i
            );
            prop_assert_eq!(here, unrolled.value(sub, i).unwrap(), "{} at {}", sub, i);
        }
    }
    Ok(())
}

pub fn prop_comp_direct(a: &Formula, b: &Formula, t: &LassoTrace) -> Result<(), TestCaseError> {
    let direct = eval_comp_direct(a, b, t).unwrap();
    let via = eval_on_trace(&Formula::comp(a.clone(), b.clone()), t).unwrap();
    prop_assert_eq!(direct, via);
    Ok(())
}

pub fn prop_in_force_dichotomy(ns: &NormSet, t: &LassoTrace) -> Result<(), TestCaseError> {
    for pos in 0..t.len() {
        let here = deontic_in_force(ns, t, pos).unwrap();
        for x in &here {
            let InForce::Prohibition(p) = x else { continue };
            let target = ns.get(p).unwrap().target();
            let clash = here.iter().any(|y| match y {
                InForce::Permission(q) => ns.get(q).unwrap().target() == target,
                InForce::Prohibition(_) => false,
            });
            prop_assert!(!clash, "{} at {} on {}", target, pos, t);
        }
    }
    Ok(())
}

pub fn prop_verdict_sound(ns: &NormSet, t: &LassoTrace) -> Result<(), TestCaseError> {
    let v = classify_trace(ns, t).unwrap();
    let uncompensated = v.violations.iter().any(|x| !x.compensated);
    prop_assert_eq!(v.status == Status::NonCompliant, uncompensated);
    prop_assert_eq!(v.status == Status::Compliant, v.violations.is_empty());
    prop_assert_eq!(v.status, reference_status(ns, t), "{}", t);
    Ok(())
}

/// Making a compensation true somewhere never turns an acceptable trace into a
/// non-compliant one.
pub fn prop_compensation_monotone(
    ns: &NormSet,
    t: &LassoTrace,
    comp: &str,
    pos: usize,
) -> Result<(), TestCaseError> {
    let before = classify_trace(ns, t).unwrap().status;
    let bit = t.props().index_of(comp).unwrap();
    let after = classify_trace(ns, &t.with_true(bit, pos % t.len()))
        .unwrap()
        .status;
    if before != Status::NonCompliant {
        prop_assert_ne!(
            after,
            Status::NonCompliant,
            "{} with {} at {}",
            t,
            comp,
            pos
        );
    }
    Ok(())
}
