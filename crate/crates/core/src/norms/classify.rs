//! State-by-state deontic reading of a norm set over a trace.
//!
//! At each position the permissions are settled first, in dependency order;
//! a prohibition is then in force when its condition holds and no permission
//! in force has the same target. A prohibition in force whose target holds is
//! violated. A violation of a compensable prohibition is compensated if the
//! compensation holds at that position or any later one.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{EvalError, NormError};
use crate::formula::Prop;
use crate::trace::LassoTrace;

use super::{NormKind, NormSet};

/// A norm in force at a position, by norm id.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InForce {
    Prohibition(String),
    Permission(String),
}

impl fmt::Display for InForce {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InForce::Prohibition(id) => write!(f, "forbidden:{id}"),
            InForce::Permission(id) => write!(f, "permitted:{id}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Compliant,
    WeaklyCompliant,
    NonCompliant,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Compliant => "compliant",
            Status::WeaklyCompliant => "weakly-compliant",
            Status::NonCompliant => "non-compliant",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub norm: String,
    pub position: usize,
    pub compensated: bool,
    /// First position (possibly past the distinguished ones, inside the
    /// second loop copy) where the compensation holds.
    pub compensation_position: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplianceVerdict {
    pub status: Status,
    pub violations: Vec<Violation>,
    /// Norms in force at each distinguished position.
    pub in_force: Vec<BTreeSet<InForce>>,
}

impl ComplianceVerdict {
    pub fn violations_of<'a>(&'a self, norm: &'a str) -> impl Iterator<Item = &'a Violation> + 'a {
        self.violations.iter().filter(move |v| v.norm == norm)
    }
}

fn check_props(ns: &NormSet, trace: &LassoTrace) -> Result<(), NormError> {
    match ns
        .props()
        .iter()
        .find(|p| !trace.props().contains(p.as_str()))
    {
        Some(p) => Err(EvalError::UnknownAtom(p.to_string()).into()),
        None => Ok(()),
    }
}

fn in_force_at(ns: &NormSet, trace: &LassoTrace, pos: usize) -> BTreeSet<InForce> {
    let val = trace.valuation(pos);
    let prop = |p: &Prop| val.contains(trace.props().index_of(p.as_str()).unwrap());
    let mut permitted: BTreeSet<&Prop> = BTreeSet::new();
    let mut out = BTreeSet::new();
    for &i in ns.permission_order() {
        let n = &ns.norms()[i];
        if n.condition().holds(prop, |p| permitted.contains(p)) {
            permitted.insert(n.target());
            out.insert(InForce::Permission(n.id.clone()));
        }
    }
    for n in ns.norms().iter().filter(|n| !n.is_permission()) {
        if !permitted.contains(n.target()) && n.condition().holds(prop, |p| permitted.contains(p)) {
            out.insert(InForce::Prohibition(n.id.clone()));
        }
    }
    out
}

/// Prohibitions and permissions in force at position `pos`.
pub fn deontic_in_force(
    ns: &NormSet,
    trace: &LassoTrace,
    pos: usize,
) -> Result<BTreeSet<InForce>, NormError> {
    check_props(ns, trace)?;
    Ok(in_force_at(ns, trace, pos))
}

/// Judges a trace against the norm set.
pub fn classify_trace(ns: &NormSet, trace: &LassoTrace) -> Result<ComplianceVerdict, NormError> {
    check_props(ns, trace)?;
    let props = trace.props();
    let horizon = trace.len() + trace.loop_len();
    let mut in_force = Vec::with_capacity(trace.len());
    let mut violations = Vec::new();

    for pos in 0..trace.len() {
        let here = in_force_at(ns, trace, pos);
        for entry in &here {
            let InForce::Prohibition(id) = entry else {
                continue;
            };
            let NormKind::Prohibition {
                target,
                compensation,
                ..
            } = &ns.get(id).unwrap().kind
            else {
                unreachable!()
            };
            if !trace
                .valuation(pos)
                .contains(props.index_of(target.as_str()).unwrap())
            {
                continue;
            }
            let compensation_position = compensation.as_ref().and_then(|c| {
                let bit = props.index_of(c.as_str()).unwrap();
                (pos..horizon).find(|&k| trace.valuation(k).contains(bit))
            });
            violations.push(Violation {
                norm: id.clone(),
                position: pos,
                compensated: compensation_position.is_some(),
                compensation_position,
            });
        }
        in_force.push(here);
    }

    let status = if violations.is_empty() {
        Status::Compliant
    } else if violations.iter().all(|v| v.compensated) {
        Status::WeaklyCompliant
    } else {
        Status::NonCompliant
    };
    Ok(ComplianceVerdict {
        status,
        violations,
        in_force,
    })
}
