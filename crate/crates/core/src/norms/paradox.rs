use std::collections::BTreeMap;

use crate::error::NormError;
use crate::eval::{check_model, StateReport};
use crate::formula::Formula;
use crate::trace::LassoTrace;
use crate::ts::{Bounds, TransitionSystem};

use super::{classify_trace, compile_norms, ComplianceVerdict, NormSet, Status};

/// Both readings of a norm set on one scenario.
#[derive(Debug, Clone)]
pub struct ParadoxReport {
    pub formulas: Vec<Formula>,
    pub model: BTreeMap<String, StateReport>,
    /// The compiled formulas hold at every state of the system.
    pub ltl_satisfied: bool,
    pub trace: LassoTrace,
    pub deontic: ComplianceVerdict,
    /// Temporal reading satisfied while the deontic reading finds an
    /// uncompensated violation.
    pub discrepancy: bool,
}

/// Checks the compiled norms on `ts` and classifies the run
/// `prefix . cycle^omega` through it.
pub fn paradox_report<S: AsRef<str>>(
    ns: &NormSet,
    ts: &TransitionSystem,
    prefix: &[S],
    cycle: &[S],
    bounds: Bounds,
) -> Result<ParadoxReport, NormError> {
    let formulas = compile_norms(ns)?;
    let model = check_model(ts, &formulas, bounds)?;
    let ltl_satisfied = model.values().all(|r| r.verdict.holds);
    let trace = ts.trace_from_path(prefix, cycle)?;
    let deontic = classify_trace(ns, &trace)?;
    let discrepancy = ltl_satisfied && deontic.status == Status::NonCompliant;
    Ok(ParadoxReport {
        formulas,
        model,
        ltl_satisfied,
        trace,
        deontic,
        discrepancy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{PRIVACY_NORMS, PRIVACY_TS};
    use crate::norms::parse_norms;
    use crate::ts::parse_ts;

    const PATH: ([&str; 3], [&str; 1]) = (["t0", "t1", "t2"], ["tl"]);

    #[test]
    fn scenario_is_a_paradox() {
        let ns = parse_norms(PRIVACY_NORMS).unwrap();
        let ts = parse_ts(PRIVACY_TS).unwrap();
        let r = paradox_report(&ns, &ts, &PATH.0, &PATH.1, Bounds::new(4, 4)).unwrap();
        assert!(r.ltl_satisfied);
        assert_eq!(r.deontic.status, Status::NonCompliant);
        assert!(r.discrepancy);
    }

    #[test]
    fn missing_compensation_is_caught_by_both() {
        let ns = parse_norms(PRIVACY_NORMS).unwrap();
        let ts = parse_ts(&PRIVACY_TS.replace("state t2: B", "state t2:")).unwrap();
        let r = paradox_report(&ns, &ts, &PATH.0, &PATH.1, Bounds::new(4, 4)).unwrap();
        assert!(!r.ltl_satisfied);
        assert!(!r.model["t0"].per_formula[0].holds);
        assert_eq!(r.deontic.status, Status::NonCompliant);
        assert!(!r.discrepancy);
    }

    #[test]
    fn clean_system_has_no_discrepancy() {
        let ns = parse_norms("norm p: forbidden A\n").unwrap();
        let ts = parse_ts("props A\nstate s:\ntrans s -> s\n").unwrap();
        let r = paradox_report(&ns, &ts, &[] as &[&str], &["s"], ts.default_bounds()).unwrap();
        assert!(r.ltl_satisfied);
        assert_eq!(r.deontic.status, Status::Compliant);
        assert!(!r.discrepancy);
    }
}
