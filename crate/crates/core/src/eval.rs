//! Truth of formulas on lasso traces and (bounded, all-paths) on transition
//! systems.
//!
//! Evaluation labels every distinguished position of the trace with the truth
//! value of every subformula, children first. Temporal operators are solved as
//! fixpoints over the successor function of the lasso: least for `U` and `F`,
//! greatest for `G` and `W`. Two backward sweeps over the loop settle the loop
//! block, after which one sweep over the prefix finishes the column.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::EvalError;
use crate::formula::{Formula, PropositionSet};
use crate::trace::LassoTrace;
use crate::ts::{Bounds, LassoPath, TransitionSystem};

/// Truth table of every subformula at every distinguished position.
#[derive(Debug, Clone)]
pub struct Labeling {
    subformulas: Vec<Formula>,
    index: HashMap<Formula, usize>,
    table: Vec<Vec<bool>>,
    prefix_len: usize,
    loop_len: usize,
}

impl Labeling {
    pub fn subformulas(&self) -> &[Formula] {
        &self.subformulas
    }

    /// Truth of `f` at any position of the infinite path, if `f` is a
    /// subformula of the labelled formula.
    pub fn value(&self, f: &Formula, pos: usize) -> Option<bool> {
        let col = &self.table[*self.index.get(f)?];
        let d = if pos < self.prefix_len {
            pos
        } else {
            self.prefix_len + (pos - self.prefix_len) % self.loop_len
        };
        Some(col[d])
    }

    /// The column of a subformula over distinguished positions.
    pub fn column(&self, f: &Formula) -> Option<&[bool]> {
        self.index.get(f).map(|&i| self.table[i].as_slice())
    }
}

/// A formula prepared for repeated evaluation against traces over one
/// proposition set.
#[derive(Debug, Clone)]
pub struct Evaluator {
    subformulas: Vec<Formula>,
    ops: Vec<Op>,
}

#[derive(Debug, Clone, Copy)]
enum Op {
    Atom(usize),
    Const(bool),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Next(usize),
    Finally(usize),
    Globally(usize),
    Until(usize, usize),
    WeakUntil(usize, usize),
    Comp(usize, usize),
}

impl Evaluator {
    pub fn new(f: &Formula, props: &PropositionSet) -> Result<Self, EvalError> {
        let subformulas = f.subformulas();
        let index: HashMap<&Formula, usize> = subformulas
            .iter()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        let ix = |g: &Formula| index[g];
        let ops = subformulas
            .iter()
            .map(|s| {
                Ok(match s {
                    Formula::Atom(p) => Op::Atom(
                        props
                            .index_of(p.as_str())
                            .ok_or_else(|| EvalError::UnknownAtom(p.to_string()))?,
                    ),
                    Formula::True => Op::Const(true),
                    Formula::False => Op::Const(false),
                    Formula::Not(g) => Op::Not(ix(g)),
                    Formula::And(g, h) => Op::And(ix(g), ix(h)),
                    Formula::Or(g, h) => Op::Or(ix(g), ix(h)),
                    Formula::Implies(g, h) => Op::Implies(ix(g), ix(h)),
                    Formula::Next(g) => Op::Next(ix(g)),
                    Formula::Finally(g) => Op::Finally(ix(g)),
                    Formula::Globally(g) => Op::Globally(ix(g)),
                    Formula::Until(g, h) => Op::Until(ix(g), ix(h)),
                    Formula::WeakUntil(g, h) => Op::WeakUntil(ix(g), ix(h)),
                    Formula::Comp(g, h) => Op::Comp(ix(g), ix(h)),
                })
            })
            .collect::<Result<Vec<_>, EvalError>>()?;
        Ok(Evaluator { subformulas, ops })
    }

    /// Truth at position 0. The trace must be over the proposition set the
    /// evaluator was built for.
    pub fn eval(&self, trace: &LassoTrace) -> bool {
        let table = self.table(trace);
        table.last().map(|c| c[0]).unwrap_or(true)
    }

    pub fn labeling(&self, trace: &LassoTrace) -> Labeling {
        let table = self.table(trace);
        Labeling {
            index: self
                .subformulas
                .iter()
                .enumerate()
                .map(|(i, s)| (s.clone(), i))
                .collect(),
            subformulas: self.subformulas.clone(),
            table,
            prefix_len: trace.prefix_len(),
            loop_len: trace.loop_len(),
        }
    }

    fn table(&self, trace: &LassoTrace) -> Vec<Vec<bool>> {
        let n = trace.len();
        let mut table: Vec<Vec<bool>> = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            let col = match *op {
                Op::Atom(bit) => (0..n).map(|i| trace.valuation(i).contains(bit)).collect(),
                Op::Const(b) => vec![b; n],
                Op::Not(a) => table[a].iter().map(|x| !x).collect(),
                Op::And(a, b) => zip(&table[a], &table[b], |x, y| x && y),
                Op::Or(a, b) => zip(&table[a], &table[b], |x, y| x || y),
                Op::Implies(a, b) => zip(&table[a], &table[b], |x, y| !x || y),
                Op::Next(a) => (0..n).map(|i| table[a][trace.successor(i)]).collect(),
                Op::Finally(a) => eventually(trace, &table[a]),
                Op::Globally(a) => always(trace, &table[a]),
                Op::Until(a, b) => {
                    fixpoint(trace, false, |i, next| table[b][i] || (table[a][i] && next))
                }
                Op::WeakUntil(a, b) => {
                    fixpoint(trace, true, |i, next| table[b][i] || (table[a][i] && next))
                }
                Op::Comp(a, b) => {
                    let maintained = always(trace, &table[a]);
                    let later = eventually(trace, &table[b]);
                    let violated_then_compensated: Vec<bool> =
                        (0..n).map(|i| !table[a][i] && later[i]).collect();
                    let some = eventually(trace, &violated_then_compensated);
                    zip(&maintained, &some, |x, y| x || y)
                }
            };
            table.push(col);
        }
        table
    }
}

fn zip(a: &[bool], b: &[bool], f: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect()
}

fn eventually(trace: &LassoTrace, col: &[bool]) -> Vec<bool> {
    fixpoint(trace, false, |i, next| col[i] || next)
}

fn always(trace: &LassoTrace, col: &[bool]) -> Vec<bool> {
    fixpoint(trace, true, |i, next| col[i] && next)
}

/// Solves `v[i] = step(i, v[succ(i)])` on the lasso, seeding the loop with
/// `init` (false for least, true for greatest fixpoints).
fn fixpoint(trace: &LassoTrace, init: bool, step: impl Fn(usize, bool) -> bool) -> Vec<bool> {
    let n = trace.len();
    let start = trace.prefix_len();
    let mut v = vec![init; n];
    for _ in 0..2 {
        for i in (start..n).rev() {
            v[i] = step(i, v[trace.successor(i)]);
        }
    }
    for i in (0..start).rev() {
        v[i] = step(i, v[i + 1]);
    }
    v
}

pub(crate) fn check_atoms(f: &Formula, props: &PropositionSet) -> Result<(), EvalError> {
    match f.atoms().iter().find(|p| !props.contains(p.as_str())) {
        Some(p) => Err(EvalError::UnknownAtom(p.to_string())),
        None => Ok(()),
    }
}

/// Truth of `f` at the first position of `trace`.
pub fn eval_on_trace(f: &Formula, trace: &LassoTrace) -> Result<bool, EvalError> {
    Ok(Evaluator::new(f, trace.props())?.eval(trace))
}

/// Full subformula labeling of `trace` for `f`.
pub fn label(f: &Formula, trace: &LassoTrace) -> Result<Labeling, EvalError> {
    Ok(Evaluator::new(f, trace.props())?.labeling(trace))
}

/// Checks `f (+) g` at position 0 straight from its definition: `f` holds at
/// every position, or there are `j <= k` with `f` false at `j` and `g` true at
/// `k`. Only the operands are evaluated through the labeling; the
/// quantifiers range over distinguished positions, with `k` searched one loop
/// beyond the last distinguished position.
pub fn eval_comp_direct(f: &Formula, g: &Formula, trace: &LassoTrace) -> Result<bool, EvalError> {
    check_atoms(f, trace.props())?;
    check_atoms(g, trace.props())?;
    let lf = label(f, trace)?;
    let lg = label(g, trace)?;
    let n = trace.len();
    let horizon = n + trace.loop_len();
    let f_at = |i: usize| lf.value(f, i).unwrap();
    let g_at = |k: usize| lg.value(g, k).unwrap();

    if (0..n).all(f_at) {
        return Ok(true);
    }
    Ok((0..n).any(|j| !f_at(j) && (j..horizon).any(g_at)))
}

/// Outcome of checking a formula at a state over all enumerated lassos.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelVerdict {
    pub holds: bool,
    pub bounds: Bounds,
    pub counterexample: Option<Counterexample>,
    /// Bounds reach `(|S|, |S|)` and enumeration covered every lasso within them.
    pub exhaustive: bool,
    pub lassos_checked: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub path: LassoPath,
    pub trace: LassoTrace,
}

impl ModelVerdict {
    pub fn to_record(&self, ts: &TransitionSystem) -> VerdictRecord {
        VerdictRecord {
            holds: self.holds,
            bounds: self.bounds,
            exhaustive: self.exhaustive,
            lassos_checked: self.lassos_checked,
            counterexample_path: self
                .counterexample
                .as_ref()
                .map(|c| ts.path_to_string(&c.path)),
            counterexample_trace: self.counterexample.as_ref().map(|c| c.trace.to_string()),
        }
    }
}

/// Serializable view of a [`ModelVerdict`].
#[derive(Debug, Clone, Serialize)]
pub struct VerdictRecord {
    pub holds: bool,
    pub bounds: Bounds,
    pub exhaustive: bool,
    pub lassos_checked: usize,
    pub counterexample_path: Option<String>,
    pub counterexample_trace: Option<String>,
}

fn check_with(
    ts: &TransitionSystem,
    state: usize,
    evaluator: &Evaluator,
    bounds: Bounds,
) -> Result<ModelVerdict, EvalError> {
    let mut count = 0;
    let exhaustive = bounds.max_prefix >= ts.num_states() && bounds.max_loop >= ts.num_states();
    for path in ts.enumerate_lassos(state, bounds) {
        count += 1;
        let trace = ts.trace_of(&path)?;
        if !evaluator.eval(&trace) {
            return Ok(ModelVerdict {
                holds: false,
                bounds,
                counterexample: Some(Counterexample { path, trace }),
                exhaustive,
                lassos_checked: count,
            });
        }
    }
    if count == 0 {
        return Err(EvalError::EmptyEnumeration {
            state: ts.state_name(state).to_string(),
            max_prefix: bounds.max_prefix,
            max_loop: bounds.max_loop,
        });
    }
    Ok(ModelVerdict {
        holds: true,
        bounds,
        counterexample: None,
        exhaustive,
        lassos_checked: count,
    })
}

/// Whether `f` holds on every lasso from `state` within `bounds`; the first
/// falsifying lasso in enumeration order is the counterexample.
pub fn check_state(
    ts: &TransitionSystem,
    state: &str,
    f: &Formula,
    bounds: Bounds,
) -> Result<ModelVerdict, EvalError> {
    let s = ts.state_index(state)?;
    let evaluator = Evaluator::new(f, ts.props())?;
    check_with(ts, s, &evaluator, bounds)
}

/// Whether `f` holds on at least one lasso from `state` within `bounds`
/// (the existential reading of compliance). Returns the first witness.
pub fn exists_path(
    ts: &TransitionSystem,
    state: &str,
    f: &Formula,
    bounds: Bounds,
) -> Result<Option<Counterexample>, EvalError> {
    let s = ts.state_index(state)?;
    let evaluator = Evaluator::new(f, ts.props())?;
    for path in ts.enumerate_lassos(s, bounds) {
        let trace = ts.trace_of(&path)?;
        if evaluator.eval(&trace) {
            return Ok(Some(Counterexample { path, trace }));
        }
    }
    Ok(None)
}

/// Per-state result of [`check_model`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateReport {
    /// Verdict for the conjunction of all formulas.
    pub verdict: ModelVerdict,
    /// Verdict for each formula on its own, in input order.
    pub per_formula: Vec<ModelVerdict>,
}

/// Checks the conjunction of `fs` at every state of `ts`.
pub fn check_model(
    ts: &TransitionSystem,
    fs: &[Formula],
    bounds: Bounds,
) -> Result<BTreeMap<String, StateReport>, EvalError> {
    let conj = Evaluator::new(&Formula::conjunction(fs.iter().cloned()), ts.props())?;
    let each = fs
        .iter()
        .map(|f| Evaluator::new(f, ts.props()))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = BTreeMap::new();
    for s in 0..ts.num_states() {
        let verdict = check_with(ts, s, &conj, bounds)?;
        let per_formula = each
            .iter()
            .map(|e| check_with(ts, s, e, bounds))
            .collect::<Result<Vec<_>, _>>()?;
        out.insert(
            ts.state_name(s).to_string(),
            StateReport {
                verdict,
                per_formula,
            },
        );
    }
    Ok(out)
}
