//! Compliance checking of norms written in linear temporal logic extended with
//! a compensation operator, over explicit transition systems and lasso traces.
//!
//! The crate has two views of the same norm set:
//!
//! * the temporal view: norms compiled to formulas ([`norms::compile_norms`])
//!   and checked against a model ([`eval::check_model`]);
//! * the deontic view: prohibitions and permissions put in force per state and
//!   violations classified per trace ([`norms::classify_trace`]).
//!
//! [`norms::paradox_report`] runs both and flags where they disagree.
//! [`oracle`] holds brute-force cross-checks over bounded trace universes.

pub mod cli;
pub mod error;
pub mod eval;
pub mod fixtures;
pub mod formula;
pub mod norms;
pub mod oracle;
pub mod trace;
pub mod ts;

pub use error::{EvalError, FormulaError, NormError, OracleError, TraceError};
pub use eval::{check_model, check_state, eval_comp_direct, eval_on_trace, ModelVerdict};
pub use formula::{parse_formula, render, Formula, Prop, PropositionSet};
pub use norms::{
    apply_overrides, classify_trace, compile_norms, deontic_in_force, paradox_report, parse_norms,
    ComplianceVerdict, Conditional, NormSet, Status,
};
pub use oracle::{brute_force_equiv, satisfiable_within, table1_check, EquivResult, Table1Report};
pub use trace::{enumerate_valuation_traces, LassoTrace, TraceLiteral, Valuation};
pub use ts::{parse_ts, Bounds, LassoPath, TransitionSystem};
