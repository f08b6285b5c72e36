use thiserror::Error;

/// Errors raised while building or parsing formulas.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("syntax error at {line}:{column}: {message} (found {token:?})")]
    Syntax {
        line: usize,
        column: usize,
        token: String,
        message: String,
    },
    #[error("unknown operator {token:?} at {line}:{column}")]
    UnknownOperator {
        line: usize,
        column: usize,
        token: String,
    },
    #[error("invalid proposition name {0:?}")]
    InvalidProposition(String),
    #[error("too many propositions ({0}); at most 64 are supported")]
    TooManyPropositions(usize),
}

/// Errors raised by transition-system and trace construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("state {0:?} has no outgoing transition")]
    SerialityViolation(String),
    #[error("undeclared state {0:?}")]
    UndeclaredState(String),
    #[error("undeclared proposition {0:?}")]
    UndeclaredProposition(String),
    #[error("duplicate state {0:?}")]
    DuplicateState(String),
    #[error("transition system declares no states")]
    NoStates,
    #[error("no transition {from} -> {to} in the transition system")]
    BrokenPath { from: String, to: String },
    #[error("lasso loop must contain at least one position")]
    EmptyLoop,
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

/// Errors raised while evaluating formulas on traces or models.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("proposition {0:?} is not part of the trace's proposition set")]
    UnknownAtom(String),
    #[error(
        "no lasso from state {state:?} fits within bounds (prefix {max_prefix}, loop {max_loop})"
    )]
    EmptyEnumeration {
        state: String,
        max_prefix: usize,
        max_loop: usize,
    },
    #[error(transparent)]
    Trace(#[from] TraceError),
}

/// Errors raised by the norm engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormError {
    #[error("norm file line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("duplicate norm id {0:?}")]
    DuplicateNorm(String),
    #[error("unknown norm id {0:?}")]
    UnknownNorm(String),
    #[error("invalid override {winner} > {loser}: {reason}")]
    InvalidOverride {
        winner: String,
        loser: String,
        reason: String,
    },
    #[error("permission conditions are not stratified: cycle through {0:?}")]
    NonStratified(Vec<String>),
    #[error("norm {norm:?}: condition cannot be compiled ({reason})")]
    UnsupportedConditionShape { norm: String, reason: String },
    #[error("override index {index} out of range for {len} conditionals")]
    IndexOutOfRange { index: usize, len: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

/// Errors raised by the brute-force oracle.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("row {row:?} expected {expected} but trace {trace} is {observed}")]
    PatternMismatch {
        row: String,
        expected: String,
        observed: String,
        trace: String,
    },
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Errors surfaced by the command-line front end; all map to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}
