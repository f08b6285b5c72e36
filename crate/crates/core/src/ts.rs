//! Explicit-state transition systems `<S, R, v>` with a serial relation, and
//! bounded enumeration of the lasso-shaped paths they admit.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::TraceError;
use crate::formula::{is_identifier, PropositionSet};
use crate::trace::{LassoTrace, TraceLiteral, Valuation};

/// A finite transition system. State indices follow the lexicographic order
/// of state ids, so index order is id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionSystem {
    props: Arc<PropositionSet>,
    names: Vec<String>,
    labels: Vec<Valuation>,
    successors: Vec<Vec<usize>>,
}

/// Bounds for lasso enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub struct Bounds {
    pub max_prefix: usize,
    pub max_loop: usize,
}

impl Bounds {
    pub fn new(max_prefix: usize, max_loop: usize) -> Self {
        Bounds {
            max_prefix,
            max_loop,
        }
    }
}

impl fmt::Display for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.max_prefix, self.max_loop)
    }
}

/// A lasso-shaped path through a transition system, as state indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LassoPath {
    pub prefix: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl TransitionSystem {
    /// Builds and validates a transition system.
    pub fn new<S: AsRef<str>>(
        props: PropositionSet,
        states: &[(S, &[S])],
        transitions: &[(S, S)],
    ) -> Result<Self, TraceError> {
        if states.is_empty() {
            return Err(TraceError::NoStates);
        }
        let mut declared: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (id, label) in states {
            let id = id.as_ref();
            if !is_identifier(id) {
                return Err(TraceError::Parse {
                    line: 0,
                    column: 0,
                    message: format!("invalid state id {id:?}"),
                });
            }
            let label = label.iter().map(|p| p.as_ref().to_string()).collect();
            if declared.insert(id.to_string(), label).is_some() {
                return Err(TraceError::DuplicateState(id.to_string()));
            }
        }
        let names: Vec<String> = declared.keys().cloned().collect();
        let index = |id: &str| {
            names
                .binary_search_by(|n| n.as_str().cmp(id))
                .map_err(|_| TraceError::UndeclaredState(id.to_string()))
        };
        let labels = declared
            .values()
            .map(|label| Valuation::from_names(&props, label.iter()))
            .collect::<Result<Vec<_>, _>>()?;
        let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); names.len()];
        for (from, to) in transitions {
            let (from, to) = (index(from.as_ref())?, index(to.as_ref())?);
            succ[from].insert(to);
        }
        if let Some(dead) = succ.iter().position(|s| s.is_empty()) {
            return Err(TraceError::SerialityViolation(names[dead].clone()));
        }
        Ok(TransitionSystem {
            props: Arc::new(props),
            names,
            labels,
            successors: succ.into_iter().map(|s| s.into_iter().collect()).collect(),
        })
    }

    pub fn props(&self) -> &PropositionSet {
        &self.props
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn state_ids(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }

    pub fn state_index(&self, id: &str) -> Result<usize, TraceError> {
        self.names
            .binary_search_by(|n| n.as_str().cmp(id))
            .map_err(|_| TraceError::UndeclaredState(id.to_string()))
    }

    pub fn state_name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn label(&self, index: usize) -> Valuation {
        self.labels[index]
    }

    pub fn successors(&self, index: usize) -> &[usize] {
        &self.successors[index]
    }

    pub fn has_transition(&self, from: usize, to: usize) -> bool {
        self.successors[from].binary_search(&to).is_ok()
    }

    /// Default enumeration bounds `(|S|, |S|)`.
    pub fn default_bounds(&self) -> Bounds {
        Bounds::new(self.num_states(), self.num_states())
    }

    /// The trace of labels along `prefix . loop^omega`, checking every step
    /// (including the prefix/loop junction and the wrap-around) is a transition.
    pub fn trace_from_path<S: AsRef<str>>(
        &self,
        prefix: &[S],
        cycle: &[S],
    ) -> Result<LassoTrace, TraceError> {
        let prefix = prefix
            .iter()
            .map(|s| self.state_index(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        let cycle = cycle
            .iter()
            .map(|s| self.state_index(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        self.trace_of(&LassoPath { prefix, cycle })
    }

    pub fn trace_of(&self, path: &LassoPath) -> Result<LassoTrace, TraceError> {
        if path.cycle.is_empty() {
            return Err(TraceError::EmptyLoop);
        }
        let seq: Vec<usize> = path
            .prefix
            .iter()
            .chain(path.cycle.iter())
            .copied()
            .collect();
        let mut steps: Vec<(usize, usize)> = seq.windows(2).map(|w| (w[0], w[1])).collect();
        steps.push((*seq.last().unwrap(), path.cycle[0]));
        for (from, to) in steps {
            if !self.has_transition(from, to) {
                return Err(TraceError::BrokenPath {
                    from: self.names[from].clone(),
                    to: self.names[to].clone(),
                });
            }
        }
        let labels = |xs: &[usize]| xs.iter().map(|&s| self.labels[s]).collect();
        LassoTrace::new(
            self.props.clone(),
            labels(&path.prefix),
            labels(&path.cycle),
        )
    }

    /// Binds a state-form or valuation-form trace literal to this system.
    pub fn trace_from_literal(&self, lit: &TraceLiteral) -> Result<LassoTrace, TraceError> {
        match lit {
            TraceLiteral::States { prefix, cycle } => self.trace_from_path(prefix, cycle),
            TraceLiteral::Valuations { .. } => lit.to_trace(&self.props),
        }
    }

    pub fn path_to_string(&self, path: &LassoPath) -> String {
        let ids = |xs: &[usize]| {
            xs.iter()
                .map(|&s| self.names[s].as_str())
                .collect::<Vec<_>>()
                .join(" ")
        };
        if path.prefix.is_empty() {
            format!("prefix: ; loop: {}", ids(&path.cycle))
        } else {
            format!("prefix: {} ; loop: {}", ids(&path.prefix), ids(&path.cycle))
        }
    }

    /// Lasso paths from `start`, each listed once.
    ///
    /// A lasso is a state sequence `prefix . loop` where consecutive states are
    /// related, the last state returns to the loop's first state, and the loop
    /// is not itself a repetition of a shorter block. Paths are ordered by total
    /// length, then prefix length, then lexicographically by state id.
    pub fn enumerate_lassos(&self, start: usize, bounds: Bounds) -> Lassos<'_> {
        Lassos {
            ts: self,
            start,
            bounds,
            total: 1,
            pending: Vec::new().into_iter(),
        }
    }

    /// Renders the system in the line-oriented file format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let props: Vec<&str> = self.props.iter().map(|p| p.as_str()).collect();
        out.push_str(&format!("props {}\n", props.join(" ")));
        for (i, name) in self.names.iter().enumerate() {
            let label = self.labels[i].names(&self.props).join(" ");
            if label.is_empty() {
                out.push_str(&format!("state {name}:\n"));
            } else {
                out.push_str(&format!("state {name}: {label}\n"));
            }
        }
        for (i, succ) in self.successors.iter().enumerate() {
            for &j in succ {
                out.push_str(&format!("trans {} -> {}\n", self.names[i], self.names[j]));
            }
        }
        out
    }
}

/// Parses the transition-system file format:
///
/// ```text
/// props A B C D
/// state t0:
/// state t1: A D
/// trans t0 -> t1
/// ```
///
/// `#` starts a comment. Every `props` line adds to the declared set.
pub fn parse_ts(text: &str) -> Result<TransitionSystem, TraceError> {
    let mut props: Vec<String> = Vec::new();
    let mut states: Vec<(String, Vec<String>)> = Vec::new();
    let mut transitions: Vec<(String, String)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        let indent = body.len() - body.trim_start().len();
        let body = body.trim();
        if body.is_empty() {
            continue;
        }
        let err = |col: usize, message: String| TraceError::Parse {
            line: line_no,
            column: indent + col + 1,
            message,
        };
        let (keyword, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        let rest_col = body.len() - rest.len();
        match keyword {
            "props" => {
                for p in rest.split_whitespace() {
                    if !is_identifier(p) {
                        return Err(err(rest_col, format!("invalid proposition {p:?}")));
                    }
                    props.push(p.to_string());
                }
            }
            "state" => {
                let Some((id, label)) = rest.split_once(':') else {
                    return Err(err(rest_col, "expected `state ID: PROPS`".into()));
                };
                let id = id.trim();
                if !is_identifier(id) {
                    return Err(err(rest_col, format!("invalid state id {id:?}")));
                }
                states.push((
                    id.to_string(),
                    label.split_whitespace().map(str::to_string).collect(),
                ));
            }
            "trans" => {
                let Some((from, to)) = rest.split_once("->") else {
                    return Err(err(rest_col, "expected `trans FROM -> TO`".into()));
                };
                let (from, to) = (from.trim(), to.trim());
                for id in [from, to] {
                    if !is_identifier(id) {
                        return Err(err(rest_col, format!("invalid state id {id:?}")));
                    }
                }
                transitions.push((from.to_string(), to.to_string()));
            }
            other => return Err(err(0, format!("unknown directive {other:?}"))),
        }
    }
    let props = PropositionSet::new(&props)?;
    let state_refs: Vec<(&str, Vec<&str>)> = states
        .iter()
        .map(|(id, l)| (id.as_str(), l.iter().map(String::as_str).collect()))
        .collect();
    let state_refs: Vec<(&str, &[&str])> = state_refs
        .iter()
        .map(|(id, l)| (*id, l.as_slice()))
        .collect();
    let trans_refs: Vec<(&str, &str)> = transitions
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    TransitionSystem::new(props, &state_refs, &trans_refs)
}

/// Iterator returned by [`TransitionSystem::enumerate_lassos`]. Lassos are
/// generated one total length at a time.
pub struct Lassos<'a> {
    ts: &'a TransitionSystem,
    start: usize,
    bounds: Bounds,
    total: usize,
    pending: std::vec::IntoIter<LassoPath>,
}

impl Iterator for Lassos<'_> {
    type Item = LassoPath;

    fn next(&mut self) -> Option<LassoPath> {
        loop {
            if let Some(p) = self.pending.next() {
                return Some(p);
            }
            if self.bounds.max_loop == 0
                || self.total > self.bounds.max_prefix + self.bounds.max_loop
            {
                return None;
            }
            let batch = self.lassos_of_length(self.total);
            self.total += 1;
            self.pending = batch.into_iter();
        }
    }
}

impl Lassos<'_> {
    fn lassos_of_length(&self, n: usize) -> Vec<LassoPath> {
        let min_prefix = n.saturating_sub(self.bounds.max_loop);
        let max_prefix = self.bounds.max_prefix.min(n - 1);
        if min_prefix > max_prefix {
            return Vec::new();
        }
        let paths = self.paths_of_length(n);
        let mut out = Vec::new();
        for p in min_prefix..=max_prefix {
            for seq in &paths {
                let cycle = &seq[p..];
                if self.ts.has_transition(seq[n - 1], cycle[0]) && is_primitive(cycle) {
                    out.push(LassoPath {
                        prefix: seq[..p].to_vec(),
                        cycle: cycle.to_vec(),
                    });
                }
            }
        }
        out
    }

    /// All paths with `n` states starting at `start`, in lexicographic order.
    fn paths_of_length(&self, n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut stack = vec![self.start];
        self.extend(&mut stack, n, &mut out);
        out
    }

    fn extend(&self, stack: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if stack.len() == n {
            out.push(stack.clone());
            return;
        }
        let last = *stack.last().unwrap();
        for &next in self.ts.successors(last) {
            stack.push(next);
            self.extend(stack, n, out);
            stack.pop();
        }
    }
}

fn is_primitive(cycle: &[usize]) -> bool {
    let n = cycle.len();
    (1..n)
        .filter(|d| n.is_multiple_of(*d))
        .all(|d| (0..n).any(|i| cycle[i] != cycle[i % d]))
}
