//! The bundled privacy-act scenario, also shipped under `examples/data/`.

/// Transition system with the court order never granted.
pub const PRIVACY_TS: &str = include_str!("../examples/data/privacy.ts");

/// Prohibitions, permissions and the compensation of the privacy act.
pub const PRIVACY_NORMS: &str = include_str!("../examples/data/privacy.norms");

/// The run collecting A and D at t1 and destroying the personal data at t2.
pub const PRIVACY_PATH: &str = include_str!("../examples/data/privacy.path");

/// The prima facie formalisation as conditionals.
pub const NAIVE_CONDITIONALS: &str = include_str!("../examples/data/naive.conditionals");

/// Which naive conditionals override which (permissions beat prohibitions).
pub const NAIVE_OVERRIDES: &str = include_str!("../examples/data/naive.overrides");
