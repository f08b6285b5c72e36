//! Ultimately periodic fullpaths (lasso traces) and their textual literals.
//!
//! A [`LassoTrace`] denotes the infinite word `prefix . loop . loop . ...`.
//! Only the `prefix.len() + loop.len()` *distinguished* positions are stored;
//! every position maps onto one of them.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::TraceError;
use crate::formula::{is_identifier, PropositionSet};

/// The set of propositions true at one position, as a bitmask over the
/// owning trace's [`PropositionSet`]. Absent propositions are false.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Valuation(pub u64);

impl Valuation {
    pub const EMPTY: Valuation = Valuation(0);

    pub fn from_names<I, S>(props: &PropositionSet, names: I) -> Result<Self, TraceError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut bits = 0u64;
        for name in names {
            let name = name.as_ref();
            let idx = props
                .index_of(name)
                .ok_or_else(|| TraceError::UndeclaredProposition(name.to_string()))?;
            bits |= 1 << idx;
        }
        Ok(Valuation(bits))
    }

    pub fn contains(self, index: usize) -> bool {
        self.0 & (1 << index) != 0
    }

    pub fn with(self, index: usize) -> Valuation {
        Valuation(self.0 | (1 << index))
    }

    pub fn names(self, props: &PropositionSet) -> Vec<&str> {
        props
            .iter()
            .enumerate()
            .filter(|(i, _)| self.contains(*i))
            .map(|(_, p)| p.as_str())
            .collect()
    }
}

/// An ultimately periodic path: finite prefix followed by a nonempty loop
/// repeated forever.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LassoTrace {
    props: Arc<PropositionSet>,
    prefix: Vec<Valuation>,
    cycle: Vec<Valuation>,
}

impl LassoTrace {
    pub fn new(
        props: Arc<PropositionSet>,
        prefix: Vec<Valuation>,
        cycle: Vec<Valuation>,
    ) -> Result<Self, TraceError> {
        if cycle.is_empty() {
            return Err(TraceError::EmptyLoop);
        }
        let mask = if props.len() >= 64 {
            u64::MAX
        } else {
            (1u64 << props.len()) - 1
        };
        if prefix.iter().chain(cycle.iter()).any(|v| v.0 & !mask != 0) {
            return Err(TraceError::UndeclaredProposition(
                "valuation bit outside the proposition set".into(),
            ));
        }
        Ok(LassoTrace {
            props,
            prefix,
            cycle,
        })
    }

    /// Builds a trace from lists of true proposition names per position.
    pub fn from_names<S: AsRef<str>>(
        props: &PropositionSet,
        prefix: &[&[S]],
        cycle: &[&[S]],
    ) -> Result<Self, TraceError> {
        let conv = |steps: &[&[S]]| {
            steps
                .iter()
                .map(|names| Valuation::from_names(props, names.iter()))
                .collect::<Result<Vec<_>, _>>()
        };
        LassoTrace::new(Arc::new(props.clone()), conv(prefix)?, conv(cycle)?)
    }

    pub fn props(&self) -> &PropositionSet {
        &self.props
    }

    pub fn shared_props(&self) -> &Arc<PropositionSet> {
        &self.props
    }

    pub fn prefix(&self) -> &[Valuation] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[Valuation] {
        &self.cycle
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn loop_len(&self) -> usize {
        self.cycle.len()
    }

    /// Number of distinguished positions.
    pub fn len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Maps any position of the infinite path to its distinguished position.
    pub fn distinguished(&self, pos: usize) -> usize {
        if pos < self.prefix.len() {
            pos
        } else {
            self.prefix.len() + (pos - self.prefix.len()) % self.cycle.len()
        }
    }

    /// Successor of a distinguished position; the last one wraps to the loop start.
    pub fn successor(&self, pos: usize) -> usize {
        if pos + 1 < self.len() {
            pos + 1
        } else {
            self.prefix.len()
        }
    }

    pub fn valuation(&self, pos: usize) -> Valuation {
        let d = self.distinguished(pos);
        if d < self.prefix.len() {
            self.prefix[d]
        } else {
            self.cycle[d - self.prefix.len()]
        }
    }

    /// Whether the named proposition holds at `pos`; `None` if it is not declared.
    pub fn holds(&self, name: &str, pos: usize) -> Option<bool> {
        self.props
            .index_of(name)
            .map(|i| self.valuation(pos).contains(i))
    }

    /// The same infinite path with the loop unrolled `times` more into the prefix.
    pub fn unrolled(&self, times: usize) -> LassoTrace {
        let mut prefix = self.prefix.clone();
        for _ in 0..times {
            prefix.extend_from_slice(&self.cycle);
        }
        LassoTrace {
            props: self.props.clone(),
            prefix,
            cycle: self.cycle.clone(),
        }
    }

    /// Returns a copy with the proposition at bit `index` made true at
    /// distinguished position `pos`.
    pub fn with_true(&self, index: usize, pos: usize) -> LassoTrace {
        let mut out = self.clone();
        let d = self.distinguished(pos);
        if d < out.prefix.len() {
            out.prefix[d] = out.prefix[d].with(index);
        } else {
            let k = d - out.prefix.len();
            out.cycle[k] = out.cycle[k].with(index);
        }
        out
    }

    fn fmt_valuation(&self, v: Valuation) -> String {
        format!("{{{}}}", v.names(&self.props).join(","))
    }
}

impl fmt::Display for LassoTrace {
    /// Valuation-form literal, e.g. `prefix: {} {A,D} {B} ; loop: {}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = |vs: &[Valuation]| {
            vs.iter()
                .map(|v| self.fmt_valuation(*v))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let prefix = part(&self.prefix);
        if prefix.is_empty() {
            write!(f, "prefix: ; loop: {}", part(&self.cycle))
        } else {
            write!(f, "prefix: {prefix} ; loop: {}", part(&self.cycle))
        }
    }
}

/// A parsed trace literal, before it is bound to a proposition set or a
/// transition system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceLiteral {
    /// `prefix: t0 t1 ; loop: tl`
    States {
        prefix: Vec<String>,
        cycle: Vec<String>,
    },
    /// `prefix: {} {A,D} ; loop: {}`
    Valuations {
        prefix: Vec<BTreeSet<String>>,
        cycle: Vec<BTreeSet<String>>,
    },
}

impl TraceLiteral {
    pub fn parse(text: &str) -> Result<Self, TraceError> {
        let text = text.trim();
        let mut prefix_src = None;
        let mut loop_src = None;
        for (part, offset) in split_with_offsets(text, ';') {
            let trimmed = part.trim();
            if trimmed.is_empty() {
                continue;
            }
            let Some((key, body)) = trimmed.split_once(':') else {
                return Err(literal_error(offset, "expected `prefix:` or `loop:`"));
            };
            let slot = match key.trim() {
                "prefix" => &mut prefix_src,
                "loop" => &mut loop_src,
                other => return Err(literal_error(offset, &format!("unknown section {other:?}"))),
            };
            if slot.is_some() {
                return Err(literal_error(offset, "section given twice"));
            }
            *slot = Some((body.to_string(), offset + part.find(':').unwrap_or(0) + 1));
        }
        let (loop_body, loop_off) =
            loop_src.ok_or_else(|| literal_error(text.len(), "missing `loop:` section"))?;
        let (prefix_body, prefix_off) = prefix_src.unwrap_or_default();

        let uses_sets = prefix_body.contains('{') || loop_body.contains('{');
        if uses_sets {
            let prefix = parse_sets(&prefix_body, prefix_off)?;
            let cycle = parse_sets(&loop_body, loop_off)?;
            if cycle.is_empty() {
                return Err(TraceError::EmptyLoop);
            }
            Ok(TraceLiteral::Valuations { prefix, cycle })
        } else {
            let prefix = parse_ids(&prefix_body, prefix_off)?;
            let cycle = parse_ids(&loop_body, loop_off)?;
            if cycle.is_empty() {
                return Err(TraceError::EmptyLoop);
            }
            Ok(TraceLiteral::States { prefix, cycle })
        }
    }

    /// Every proposition named by a valuation-form literal.
    pub fn mentioned_props(&self) -> BTreeSet<String> {
        match self {
            TraceLiteral::States { .. } => BTreeSet::new(),
            TraceLiteral::Valuations { prefix, cycle } => prefix
                .iter()
                .chain(cycle.iter())
                .flatten()
                .cloned()
                .collect(),
        }
    }

    /// Binds a valuation-form literal to `props`; state-form literals need a
    /// transition system (see [`crate::ts::TransitionSystem::trace_from_literal`]).
    pub fn to_trace(&self, props: &PropositionSet) -> Result<LassoTrace, TraceError> {
        match self {
            TraceLiteral::States { .. } => Err(TraceError::Parse {
                line: 1,
                column: 1,
                message: "state-form trace needs a transition system".into(),
            }),
            TraceLiteral::Valuations { prefix, cycle } => {
                let conv = |sets: &[BTreeSet<String>]| {
                    sets.iter()
                        .map(|s| Valuation::from_names(props, s.iter()))
                        .collect::<Result<Vec<_>, _>>()
                };
                LassoTrace::new(Arc::new(props.clone()), conv(prefix)?, conv(cycle)?)
            }
        }
    }
}

fn literal_error(offset: usize, message: &str) -> TraceError {
    TraceError::Parse {
        line: 1,
        column: offset + 1,
        message: message.to_string(),
    }
}

fn split_with_offsets(text: &str, sep: char) -> Vec<(&str, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in text.char_indices() {
        if c == sep {
            out.push((&text[start..i], start));
            start = i + c.len_utf8();
        }
    }
    out.push((&text[start..], start));
    out
}

fn parse_ids(body: &str, offset: usize) -> Result<Vec<String>, TraceError> {
    body.split_whitespace()
        .map(|id| {
            if is_identifier(id) {
                Ok(id.to_string())
            } else {
                let col = offset + body.find(id).unwrap_or(0);
                Err(literal_error(col, &format!("invalid state id {id:?}")))
            }
        })
        .collect()
}

fn parse_sets(body: &str, offset: usize) -> Result<Vec<BTreeSet<String>>, TraceError> {
    let mut out = Vec::new();
    let mut rest = body;
    let mut consumed = 0;
    loop {
        let trimmed = rest.trim_start();
        consumed += rest.len() - trimmed.len();
        rest = trimmed;
        if rest.is_empty() {
            return Ok(out);
        }
        if !rest.starts_with('{') {
            return Err(literal_error(offset + consumed, "expected `{`"));
        }
        let close = rest
            .find('}')
            .ok_or_else(|| literal_error(offset + consumed, "unclosed `{`"))?;
        let mut set = BTreeSet::new();
        for name in rest[1..close].split(|c: char| c == ',' || c.is_whitespace()) {
            if name.is_empty() {
                continue;
            }
            if !is_identifier(name) {
                return Err(literal_error(
                    offset + consumed,
                    &format!("invalid proposition {name:?}"),
                ));
            }
            set.insert(name.to_string());
        }
        out.push(set);
        consumed += close + 1;
        rest = &rest[close + 1..];
    }
}

/// Every lasso trace over `props` with prefix length at most `max_prefix` and
/// loop length between 1 and `max_loop`.
///
/// Traces are ordered by total length, then prefix length, then valuation
/// sequence. The number of traces is
/// `sum_{p <= max_prefix} sum_{1 <= l <= max_loop} (2^|props|)^(p + l)`.
pub fn enumerate_valuation_traces(
    props: &PropositionSet,
    max_prefix: usize,
    max_loop: usize,
) -> ValuationTraces {
    let mut shapes: Vec<(usize, usize)> = (0..=max_prefix)
        .flat_map(|p| (1..=max_loop).map(move |l| (p, l)))
        .collect();
    shapes.sort_by_key(|&(p, l)| (p + l, p));
    assert!(props.len() < 64, "too many propositions to enumerate");
    ValuationTraces {
        props: Arc::new(props.clone()),
        max_digit: (1u64 << props.len()) - 1,
        shapes,
        shape: 0,
        digits: None,
    }
}

/// Expected size of [`enumerate_valuation_traces`], saturating on overflow.
pub fn valuation_trace_count(num_props: usize, max_prefix: usize, max_loop: usize) -> u128 {
    let base = 1u128.checked_shl(num_props as u32).unwrap_or(u128::MAX);
    let mut total: u128 = 0;
    for p in 0..=max_prefix {
        for l in 1..=max_loop {
            let term = base.checked_pow((p + l) as u32).unwrap_or(u128::MAX);
            total = total.saturating_add(term);
        }
    }
    total
}

/// Iterator returned by [`enumerate_valuation_traces`].
pub struct ValuationTraces {
    props: Arc<PropositionSet>,
    max_digit: u64,
    shapes: Vec<(usize, usize)>,
    shape: usize,
    digits: Option<Vec<u64>>,
}

impl Iterator for ValuationTraces {
    type Item = LassoTrace;

    fn next(&mut self) -> Option<LassoTrace> {
        loop {
            let &(p, l) = self.shapes.get(self.shape)?;
            let digits = match &mut self.digits {
                None => {
                    self.digits = Some(vec![0; p + l]);
                    self.digits.as_ref().unwrap()
                }
                Some(d) => {
                    // odometer, last position fastest
                    let mut i = d.len();
                    let mut carried_out = true;
                    while i > 0 {
                        i -= 1;
                        if d[i] < self.max_digit {
                            d[i] += 1;
                            carried_out = false;
                            break;
                        }
                        d[i] = 0;
                    }
                    if carried_out {
                        self.digits = None;
                        self.shape += 1;
                        continue;
                    }
                    d
                }
            };
            let vals: Vec<Valuation> = digits.iter().map(|&b| Valuation(b)).collect();
            return Some(LassoTrace {
                props: self.props.clone(),
                prefix: vals[..p].to_vec(),
                cycle: vals[p..].to_vec(),
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abcd() -> PropositionSet {
        PropositionSet::new(["A", "B", "C", "D"]).unwrap()
    }

    #[test]
    fn positions_fold_onto_the_loop() {
        let t = LassoTrace::from_names(&abcd(), &[&[], &["A", "D"], &["B"]], &[&[] as &[&str]])
            .unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(t.holds("A", 1), Some(true));
        assert_eq!(t.holds("D", 1), Some(true));
        assert_eq!(t.holds("B", 2), Some(true));
        for pos in 3..20 {
            assert_eq!(t.valuation(pos), Valuation::EMPTY);
            assert_eq!(t.distinguished(pos), 3);
        }
        assert_eq!(t.successor(3), 3);
        assert_eq!(t.holds("Z", 0), None);
    }

    #[test]
    fn empty_loop_rejected() {
        let props = Arc::new(abcd());
        assert_eq!(
            LassoTrace::new(props, vec![Valuation::EMPTY], vec![]),
            Err(TraceError::EmptyLoop)
        );
    }

    #[test]
    fn literal_round_trip() {
        let text = "prefix: {} {A,D} {B} ; loop: {}";
        let lit = TraceLiteral::parse(text).unwrap();
        let t = lit.to_trace(&abcd()).unwrap();
        assert_eq!(t.to_string(), text);
        assert_eq!(t.prefix_len(), 3);

        let only_loop = TraceLiteral::parse("loop: {A} {}").unwrap();
        assert_eq!(
            only_loop.to_trace(&abcd()).unwrap().to_string(),
            "prefix: ; loop: {A} {}"
        );
    }

    #[test]
    fn state_literals() {
        let lit = TraceLiteral::parse("prefix: t0 t1 t2 ; loop: tl").unwrap();
        assert_eq!(
            lit,
            TraceLiteral::States {
                prefix: vec!["t0".into(), "t1".into(), "t2".into()],
                cycle: vec!["tl".into()],
            }
        );
    }

    #[test]
    fn literal_errors() {
        assert!(matches!(
            TraceLiteral::parse("prefix: {A}"),
            Err(TraceError::Parse { .. })
        ));
        assert_eq!(
            TraceLiteral::parse("prefix: {A} ; loop:"),
            Err(TraceError::EmptyLoop)
        );
        assert!(matches!(
            TraceLiteral::parse("loop: {A"),
            Err(TraceError::Parse { .. })
        ));
        assert!(matches!(
            TraceLiteral::parse("loop: {E}").unwrap().to_trace(&abcd()),
            Err(TraceError::UndeclaredProposition(p)) if p == "E"
        ));
    }

    #[test]
    fn valuation_trace_counts() {
        let a = PropositionSet::new(["a"]).unwrap();
        assert_eq!(enumerate_valuation_traces(&a, 0, 1).count(), 2);
        assert_eq!(enumerate_valuation_traces(&a, 1, 1).count(), 6);
        assert_eq!(valuation_trace_count(4, 2, 1), 16 + 256 + 4096);
        assert_eq!(
            enumerate_valuation_traces(&abcd(), 2, 1).count(),
            16 + 256 + 4096
        );
        let ab = PropositionSet::new(["a", "b"]).unwrap();
        assert_eq!(
            enumerate_valuation_traces(&ab, 3, 2).count() as u128,
            valuation_trace_count(2, 3, 2)
        );
    }

    #[test]
    fn valuation_traces_are_distinct_and_shortest_first() {
        let a = PropositionSet::new(["a"]).unwrap();
        let all: Vec<LassoTrace> = enumerate_valuation_traces(&a, 2, 2).collect();
        let unique: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(unique.len(), all.len());
        assert!(all.windows(2).all(|w| w[0].len() <= w[1].len()));
    }

    #[test]
    fn empty_proposition_set_enumerates_one_trace_per_shape() {
        let none = PropositionSet::default();
        assert_eq!(enumerate_valuation_traces(&none, 1, 2).count(), 4);
    }
}
