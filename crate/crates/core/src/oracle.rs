//! Brute-force ground truth over bounded universes of lasso traces.
//!
//! Everything here enumerates every trace over a proposition set up to given
//! prefix and loop lengths. Results are exact for that universe and say
//! nothing beyond it.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{EvalError, OracleError};
use crate::eval::{check_atoms, Evaluator};
use crate::formula::{Formula, PropositionSet};
use crate::norms::{classify_trace, CondAtom, NormKind, NormSet, Status};
use crate::trace::{enumerate_valuation_traces, LassoTrace};
use crate::ts::Bounds;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivResult {
    pub equivalent: bool,
    pub bounds: Bounds,
    pub traces_checked: usize,
    /// A trace on which the formulas differ, with their truth values at
    /// position 0 (first formula, second formula).
    pub counterexample: Option<(LassoTrace, bool, bool)>,
}

/// Compares `f` and `g` on every trace over `props` within the bounds; stops
/// at the first disagreement.
pub fn brute_force_equiv(
    f: &Formula,
    g: &Formula,
    props: &PropositionSet,
    max_prefix: usize,
    max_loop: usize,
) -> Result<EquivResult, EvalError> {
    check_atoms(f, props)?;
    check_atoms(g, props)?;
    let (ef, eg) = (Evaluator::new(f, props)?, Evaluator::new(g, props)?);
    let mut checked = 0;
    for t in enumerate_valuation_traces(props, max_prefix, max_loop) {
        checked += 1;
        let (a, b) = (ef.eval(&t), eg.eval(&t));
        if a != b {
            return Ok(EquivResult {
                equivalent: false,
                bounds: Bounds::new(max_prefix, max_loop),
                traces_checked: checked,
                counterexample: Some((t, a, b)),
            });
        }
    }
    Ok(EquivResult {
        equivalent: true,
        bounds: Bounds::new(max_prefix, max_loop),
        traces_checked: checked,
        counterexample: None,
    })
}

/// The first enumerated trace satisfying `f`, if any.
pub fn satisfiable_within(
    f: &Formula,
    props: &PropositionSet,
    max_prefix: usize,
    max_loop: usize,
) -> Result<Option<LassoTrace>, EvalError> {
    check_atoms(f, props)?;
    let ef = Evaluator::new(f, props)?;
    Ok(enumerate_valuation_traces(props, max_prefix, max_loop).find(|t| ef.eval(t)))
}

/// Status of a trace recomputed from the deontic rules without the norm
/// engine's stratification: permissions are re-evaluated from scratch until
/// nothing changes, and compensations are looked up on an explicit unrolling.
pub fn reference_status(ns: &NormSet, trace: &LassoTrace) -> Status {
    let unrolled: Vec<BTreeSet<&str>> = (0..trace.len() + trace.loop_len())
        .map(|k| {
            trace
                .valuation(k)
                .names(trace.props())
                .into_iter()
                .collect()
        })
        .collect();
    let mut any_violation = false;
    let mut any_uncompensated = false;

    for (pos, here) in unrolled.iter().enumerate().take(trace.len()) {
        let lit_true = |atom: &CondAtom, permitted: &BTreeSet<String>| match atom {
            CondAtom::Prop(p) => here.contains(p.as_str()),
            CondAtom::Permitted(p) => permitted.contains(p.as_str()),
        };
        let cond_true = |n: &crate::norms::Norm, permitted: &BTreeSet<String>| {
            n.condition()
                .0
                .iter()
                .all(|l| lit_true(&l.atom, permitted) != l.negated)
        };
        let mut permitted: BTreeSet<String> = BTreeSet::new();
        for _ in 0..=ns.norms().len() {
            let next: BTreeSet<String> = ns
                .norms()
                .iter()
                .filter(|n| n.is_permission() && cond_true(n, &permitted))
                .map(|n| n.target().to_string())
                .collect();
            if next == permitted {
                break;
            }
            permitted = next;
        }
        for n in ns.norms() {
            let NormKind::Prohibition {
                target,
                compensation,
                ..
            } = &n.kind
            else {
                continue;
            };
            let in_force = !permitted.contains(target.as_str()) && cond_true(n, &permitted);
            if in_force && here.contains(target.as_str()) {
                any_violation = true;
                let made_good = compensation
                    .as_ref()
                    .is_some_and(|c| unrolled[pos..].iter().any(|v| v.contains(c.as_str())));
                if !made_good {
                    any_uncompensated = true;
                }
            }
        }
    }
    match (any_violation, any_uncompensated) {
        (false, _) => Status::Compliant,
        (true, false) => Status::WeaklyCompliant,
        (true, true) => Status::NonCompliant,
    }
}

/// One row of the privacy-act compliance table, as a predicate on traces.
#[derive(Debug, Clone, Copy)]
pub struct Table1Row {
    pub minimal_set: &'static str,
    pub expected: Status,
    pub pattern: &'static str,
    matches: fn(&RowView) -> bool,
}

/// Truth of A, B, C, D along a trace, with B looked up one loop past the end.
pub struct RowView {
    a: Vec<bool>,
    b: Vec<bool>,
    c: Vec<bool>,
    d: Vec<bool>,
    len: usize,
}

impl RowView {
    fn new(trace: &LassoTrace) -> Self {
        let n = trace.len() + trace.loop_len();
        let col = |p: &str| {
            (0..n)
                .map(|k| trace.holds(p, k).unwrap())
                .collect::<Vec<_>>()
        };
        RowView {
            a: col("A"),
            b: col("B"),
            c: col("C"),
            d: col("D"),
            len: trace.len(),
        }
    }

    fn positions(&self) -> std::ops::Range<usize> {
        0..self.len
    }

    fn b_from(&self, i: usize) -> bool {
        self.b[i..].iter().any(|&x| x)
    }

    fn collects_a_without_order(&self, i: usize) -> bool {
        !self.c[i] && self.a[i]
    }

    fn collects_d_without_order(&self, i: usize) -> bool {
        !self.c[i] && self.d[i]
    }
}

/// The five rows. Patterns are read over the distinguished positions of a
/// trace; "B afterwards" means B at the same position or any later one.
pub const TABLE1: [Table1Row; 5] = [
    Table1Row {
        minimal_set: "C",
        expected: Status::Compliant,
        pattern: "C at every position",
        matches: |v| v.positions().all(|i| v.c[i]),
    },
    Table1Row {
        minimal_set: "!C, A, B",
        expected: Status::WeaklyCompliant,
        pattern: "some position has !C & A; every !C & A position has B afterwards; no position has !C & D",
        matches: |v| {
            v.positions().any(|i| v.collects_a_without_order(i))
                && v.positions()
                    .all(|i| !v.collects_a_without_order(i) || v.b_from(i))
                && !v.positions().any(|i| v.collects_d_without_order(i))
        },
    },
    Table1Row {
        minimal_set: "!C, A, !B",
        expected: Status::NonCompliant,
        pattern: "some position has !C & A with no B afterwards",
        matches: |v| {
            v.positions()
                .any(|i| v.collects_a_without_order(i) && !v.b_from(i))
        },
    },
    Table1Row {
        minimal_set: "!C, D",
        expected: Status::NonCompliant,
        pattern: "some position has !C & D",
        matches: |v| v.positions().any(|i| v.collects_d_without_order(i)),
    },
    Table1Row {
        minimal_set: "!C, !A, !D",
        expected: Status::Compliant,
        pattern: "some position has !C; every !C position has !A & !D",
        matches: |v| {
            v.positions().any(|i| !v.c[i])
                && v.positions().all(|i| v.c[i] || (!v.a[i] && !v.d[i]))
        },
    },
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowReport {
    pub minimal_set: String,
    pub pattern: String,
    pub expected: Status,
    pub matched: usize,
    pub observed: BTreeSet<Status>,
    pub witness: Option<String>,
    pub mismatch: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table1Report {
    pub bounds: Bounds,
    pub traces: usize,
    pub status_counts: BTreeMap<Status, usize>,
    /// Traces where the norm engine and [`reference_status`] disagree.
    pub engine_disagreements: usize,
    pub first_disagreement: Option<String>,
    pub rows: Vec<RowReport>,
}

impl Table1Report {
    pub fn mismatches(&self) -> usize {
        self.rows.iter().filter(|r| r.mismatch.is_some()).count()
    }

    pub fn is_consistent(&self) -> bool {
        self.mismatches() == 0 && self.engine_disagreements == 0
    }

    /// Fails with the first row mismatch, if any.
    pub fn verify(&self) -> Result<(), OracleError> {
        for r in &self.rows {
            if let Some(trace) = &r.mismatch {
                let observed = r
                    .observed
                    .iter()
                    .filter(|s| **s != r.expected)
                    .map(|s| s.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                return Err(OracleError::PatternMismatch {
                    row: r.minimal_set.to_string(),
                    expected: r.expected.to_string(),
                    observed,
                    trace: trace.clone(),
                });
            }
        }
        if let Some(trace) = &self.first_disagreement {
            return Err(OracleError::PatternMismatch {
                row: "reference recomputation".into(),
                expected: "agreement".into(),
                observed: "disagreement".into(),
                trace: trace.clone(),
            });
        }
        Ok(())
    }
}

/// Default bounds for [`table1_check`]: three prefix positions, one loop position.
pub const TABLE1_BOUNDS: Bounds = Bounds {
    max_prefix: 3,
    max_loop: 1,
};

/// Classifies every trace over {A, B, C, D} within `bounds` and checks each
/// table row: every trace matching a row's pattern must get the row's status.
/// `jobs` > 1 classifies in parallel; the report does not depend on it.
pub fn table1_check(
    ns: &NormSet,
    bounds: Bounds,
    jobs: usize,
) -> Result<Table1Report, OracleError> {
    let props = PropositionSet::new(["A", "B", "C", "D"]).expect("valid names");
    if let Some(p) = ns.props().iter().find(|p| !props.contains(p.as_str())) {
        return Err(EvalError::UnknownAtom(p.to_string()).into());
    }
    let traces: Vec<LassoTrace> =
        enumerate_valuation_traces(&props, bounds.max_prefix, bounds.max_loop).collect();

    let classify = |t: &LassoTrace| -> Result<(Status, Status), OracleError> {
        Ok((classify_trace(ns, t)?.status, reference_status(ns, t)))
    };
    let results: Vec<(Status, Status)> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        pool.install(|| traces.par_iter().map(classify).collect::<Result<_, _>>())?
    } else {
        traces.iter().map(classify).collect::<Result<_, _>>()?
    };

    let mut status_counts = BTreeMap::new();
    let mut engine_disagreements = 0;
    let mut first_disagreement = None;
    let mut rows: Vec<RowReport> = TABLE1
        .iter()
        .map(|r| RowReport {
            minimal_set: r.minimal_set.to_string(),
            pattern: r.pattern.to_string(),
            expected: r.expected,
            matched: 0,
            observed: BTreeSet::new(),
            witness: None,
            mismatch: None,
        })
        .collect();

    for (t, &(status, reference)) in traces.iter().zip(&results) {
        *status_counts.entry(status).or_insert(0) += 1;
        if status != reference {
            engine_disagreements += 1;
            first_disagreement.get_or_insert_with(|| t.to_string());
        }
        let view = RowView::new(t);
        for (row, report) in TABLE1.iter().zip(rows.iter_mut()) {
            if !(row.matches)(&view) {
                continue;
            }
            report.matched += 1;
            report.observed.insert(status);
            report.witness.get_or_insert_with(|| t.to_string());
            if status != row.expected {
                report.mismatch.get_or_insert_with(|| t.to_string());
            }
        }
    }

    Ok(Table1Report {
        bounds,
        traces: traces.len(),
        status_counts,
        engine_disagreements,
        first_disagreement,
        rows,
    })
}
