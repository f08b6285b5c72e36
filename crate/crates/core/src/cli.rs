//! The `normcheck` command line.
//!
//! Exit codes: 0 for success or a positive verdict, 1 for a negative verdict
//! or a violation, 2 for usage and input errors. `--format structured` prints
//! one JSON record per line with a fixed field order.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::CliError;
use crate::eval::{
    check_model, check_state, eval_on_trace, ModelVerdict, StateReport, VerdictRecord,
};
use crate::fixtures::{PRIVACY_NORMS, PRIVACY_PATH, PRIVACY_TS};
use crate::formula::{parse_formula, parse_formula_list, Formula, PropositionSet};
use crate::norms::{
    apply_overrides, classify_trace, compile_norms, paradox_report, parse_conditionals,
    parse_norms, parse_overrides, ComplianceVerdict, NormSet, Status,
};
use crate::oracle::{brute_force_equiv, satisfiable_within, table1_check, TABLE1_BOUNDS};
use crate::trace::{LassoTrace, TraceLiteral};
use crate::ts::{parse_ts, Bounds, TransitionSystem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "normcheck",
    version,
    about = "Check norms with compensations against traces and transition systems"
)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for oracle enumeration; output does not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a formula at position 0 of a lasso trace.
    Eval {
        #[arg(long)]
        formula: String,
        #[command(flatten)]
        trace: TraceArgs,
        /// Transition system for traces written as state ids.
        #[arg(long)]
        ts: Option<String>,
    },
    /// Check formulas, or compiled norms, at the states of a transition system.
    Check {
        #[arg(long)]
        ts: String,
        #[arg(long, required_unless_present = "norms", conflicts_with = "norms")]
        formulas: Option<String>,
        #[arg(long)]
        norms: Option<String>,
        #[arg(long)]
        state: Option<String>,
        /// Defaults to (|S|, |S|).
        #[arg(long, value_parser = parse_bounds)]
        bounds: Option<Bounds>,
    },
    /// Classify a trace against a norm set.
    Classify {
        #[command(flatten)]
        trace: TraceArgs,
        #[arg(long)]
        norms: String,
        #[arg(long)]
        ts: Option<String>,
    },
    /// Apply overrides to a list of conditionals.
    Rewrite {
        #[arg(long)]
        conditionals: String,
        #[arg(long)]
        overrides: String,
    },
    #[command(subcommand)]
    Oracle(OracleCommand),
    #[command(subcommand)]
    Demo(DemoCommand),
}

#[derive(Debug, Args)]
struct TraceArgs {
    #[arg(
        long,
        required_unless_present = "trace_file",
        conflicts_with = "trace_file"
    )]
    trace: Option<String>,
    #[arg(long)]
    trace_file: Option<String>,
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    /// Compare two formulas on every bounded trace.
    Equiv {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long, value_parser = parse_props)]
        props: PropositionSet,
        #[arg(long, value_parser = parse_bounds, default_value = "3,2")]
        bounds: Bounds,
    },
    /// Search the bounded traces for a model of a formula.
    Sat {
        #[arg(long)]
        f: String,
        #[arg(long, value_parser = parse_props)]
        props: PropositionSet,
        #[arg(long, value_parser = parse_bounds, default_value = "3,2")]
        bounds: Bounds,
    },
    /// Check the privacy-act compliance table on every bounded trace.
    Table1 {
        /// Defaults to the bundled privacy norms.
        #[arg(long)]
        norms: Option<String>,
        #[arg(long, value_parser = parse_bounds, default_value = "3,1")]
        bounds: Bounds,
        /// Also write one JSON record per row to this file.
        #[arg(long)]
        records: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
enum DemoCommand {
    /// Run the bundled privacy scenario through both readings.
    Paradox,
}

fn parse_bounds(s: &str) -> Result<Bounds, String> {
    let (p, l) = s
        .split_once(',')
        .ok_or_else(|| format!("expected P,L, found {s:?}"))?;
    let num = |x: &str| {
        x.trim()
            .parse::<usize>()
            .map_err(|_| format!("not a number: {x:?}"))
    };
    let bounds = Bounds::new(num(p)?, num(l)?);
    if bounds.max_loop == 0 {
        return Err("loop bound must be at least 1".into());
    }
    Ok(bounds)
}

fn parse_props(s: &str) -> Result<PropositionSet, String> {
    PropositionSet::new(s.split(',').map(str::trim).filter(|x| !x.is_empty()))
        .map_err(|e| e.to_string())
}

/// Parses `args` (program name first) and runs one subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let mut ctx = Ctx {
        out,
        format: cli.format,
        jobs: cli.jobs.max(1),
    };
    match ctx.dispatch(cli.command) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_NEGATIVE,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn read(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_string(),
        source,
    })
}

fn trace_literal(args: &TraceArgs) -> Result<TraceLiteral, CliError> {
    let text = match (&args.trace, &args.trace_file) {
        (Some(t), _) => t.clone(),
        (None, Some(p)) => read(p)?,
        (None, None) => return Err(CliError::Input("a trace is required".into())),
    };
    Ok(TraceLiteral::parse(&text)?)
}

/// Binds a literal either to a transition system or to `props` plus whatever
/// the literal itself mentions.
fn bind_trace(
    lit: &TraceLiteral,
    ts: Option<&str>,
    props: &PropositionSet,
) -> Result<LassoTrace, CliError> {
    if let Some(path) = ts {
        let ts = parse_ts(&read(path)?)?;
        return Ok(ts.trace_from_literal(lit)?);
    }
    if matches!(lit, TraceLiteral::States { .. }) {
        return Err(CliError::Input(
            "a trace of state ids needs --ts; write valuations as {A,B} otherwise".into(),
        ));
    }
    let all = props.union(&PropositionSet::new(lit.mentioned_props())?);
    Ok(lit.to_trace(&all)?)
}

#[derive(Serialize)]
struct EvalRecord {
    record: &'static str,
    formula: String,
    trace: String,
    holds: bool,
}

#[derive(Serialize)]
struct FormulaRecord {
    record: &'static str,
    label: String,
    formula: String,
}

#[derive(Serialize)]
struct StateRecord {
    record: &'static str,
    state: String,
    #[serde(flatten)]
    verdict: VerdictRecord,
    failing: Vec<String>,
}

#[derive(Serialize)]
struct SummaryRecord {
    record: &'static str,
    holds: bool,
}

#[derive(Serialize)]
struct ClassifyRecord<'a> {
    record: &'static str,
    trace: String,
    #[serde(flatten)]
    verdict: &'a ComplianceVerdict,
}

#[derive(Serialize)]
struct EquivRecord {
    record: &'static str,
    f: String,
    g: String,
    bounds: Bounds,
    traces_checked: usize,
    equivalent: bool,
    counterexample: Option<String>,
    f_value: Option<bool>,
    g_value: Option<bool>,
}

#[derive(Serialize)]
struct SatRecord {
    record: &'static str,
    f: String,
    bounds: Bounds,
    satisfiable: bool,
    witness: Option<String>,
}

#[derive(Serialize)]
struct ParadoxRecord<'a> {
    record: &'static str,
    ltl_satisfied: bool,
    path: String,
    trace: String,
    status: Status,
    violations: &'a [crate::norms::Violation],
    discrepancy: bool,
}

struct Ctx<'a> {
    out: &'a mut dyn Write,
    format: Format,
    jobs: usize,
}

impl Ctx<'_> {
    fn structured(&self) -> bool {
        self.format == Format::Structured
    }

    fn emit<T: Serialize>(&mut self, record: &T) -> Result<(), CliError> {
        let line = serde_json::to_string(record).expect("records serialize");
        writeln!(self.out, "{line}")?;
        Ok(())
    }

    fn dispatch(&mut self, cmd: Command) -> Result<bool, CliError> {
        match cmd {
            Command::Eval { formula, trace, ts } => self.eval(&formula, &trace, ts.as_deref()),
            Command::Check {
                ts,
                formulas,
                norms,
                state,
                bounds,
            } => self.check(
                &ts,
                formulas.as_deref(),
                norms.as_deref(),
                state.as_deref(),
                bounds,
            ),
            Command::Classify { trace, norms, ts } => self.classify(&trace, &norms, ts.as_deref()),
            Command::Rewrite {
                conditionals,
                overrides,
            } => self.rewrite(&conditionals, &overrides),
            Command::Oracle(OracleCommand::Equiv {
                f,
                g,
                props,
                bounds,
            }) => self.equiv(&f, &g, &props, bounds),
            Command::Oracle(OracleCommand::Sat { f, props, bounds }) => {
                self.sat(&f, &props, bounds)
            }
            Command::Oracle(OracleCommand::Table1 {
                norms,
                bounds,
                records,
            }) => self.table1(norms.as_deref(), bounds, records.as_deref()),
            Command::Demo(DemoCommand::Paradox) => self.paradox(),
        }
    }

    fn eval(
        &mut self,
        formula: &str,
        trace: &TraceArgs,
        ts: Option<&str>,
    ) -> Result<bool, CliError> {
        let f = parse_formula(formula)?;
        let t = bind_trace(&trace_literal(trace)?, ts, &f.atoms())?;
        let holds = eval_on_trace(&f, &t)?;
        if self.structured() {
            self.emit(&EvalRecord {
                record: "eval",
                formula: f.to_string(),
                trace: t.to_string(),
                holds,
            })?;
        } else {
            writeln!(self.out, "{holds}")?;
        }
        Ok(holds)
    }

    fn check(
        &mut self,
        ts_path: &str,
        formulas: Option<&str>,
        norms: Option<&str>,
        state: Option<&str>,
        bounds: Option<Bounds>,
    ) -> Result<bool, CliError> {
        let ts = parse_ts(&read(ts_path)?)?;
        let (fs, tag) = match (formulas, norms) {
            (Some(p), _) => (parse_formula_list(&read(p)?)?, "F"),
            (None, Some(p)) => (compile_norms(&parse_norms(&read(p)?)?)?, "N"),
            (None, None) => {
                return Err(CliError::Input("--formulas or --norms is required".into()))
            }
        };
        let bounds = bounds.unwrap_or_else(|| ts.default_bounds());
        let labels: Vec<String> = (1..=fs.len()).map(|i| format!("{tag}{i}")).collect();
        self.formula_lines(&labels, &fs)?;

        let reports = match state {
            Some(s) => {
                let conj = Formula::conjunction(fs.iter().cloned());
                let verdict = check_state(&ts, s, &conj, bounds)?;
                let per_formula = fs
                    .iter()
                    .map(|f| check_state(&ts, s, f, bounds))
                    .collect::<Result<Vec<_>, _>>()?;
                [(
                    s.to_string(),
                    StateReport {
                        verdict,
                        per_formula,
                    },
                )]
                .into()
            }
            None => check_model(&ts, &fs, bounds)?,
        };
        let mut all = true;
        for (name, report) in &reports {
            all &= report.verdict.holds;
            self.state_lines(&ts, name, report, &labels)?;
        }
        if self.structured() {
            self.emit(&SummaryRecord {
                record: "summary",
                holds: all,
            })?;
        } else if all {
            writeln!(self.out, "satisfied at every checked state")?;
        } else {
            writeln!(self.out, "not satisfied")?;
        }
        Ok(all)
    }

    fn formula_lines(&mut self, labels: &[String], fs: &[Formula]) -> Result<(), CliError> {
        for (label, f) in labels.iter().zip(fs) {
            if self.structured() {
                self.emit(&FormulaRecord {
                    record: "formula",
                    label: label.clone(),
                    formula: f.to_string(),
                })?;
            } else {
                writeln!(self.out, "{label}  {f}")?;
            }
        }
        Ok(())
    }

    fn state_lines(
        &mut self,
        ts: &TransitionSystem,
        name: &str,
        report: &StateReport,
        labels: &[String],
    ) -> Result<(), CliError> {
        let failing: Vec<String> = labels
            .iter()
            .zip(&report.per_formula)
            .filter(|(_, v)| !v.holds)
            .map(|(l, _)| l.clone())
            .collect();
        if self.structured() {
            return self.emit(&StateRecord {
                record: "state",
                state: name.to_string(),
                verdict: report.verdict.to_record(ts),
                failing,
            });
        }
        let v = &report.verdict;
        writeln!(
            self.out,
            "state {name}: {} ({})",
            if v.holds { "holds" } else { "fails" },
            verdict_note(v)
        )?;
        if let Some(c) = &v.counterexample {
            writeln!(self.out, "  counterexample: {}", ts.path_to_string(&c.path))?;
            writeln!(self.out, "  trace: {}", c.trace)?;
        }
        if !failing.is_empty() {
            writeln!(self.out, "  failing: {}", failing.join(" "))?;
        }
        Ok(())
    }

    fn classify(
        &mut self,
        trace: &TraceArgs,
        norms: &str,
        ts: Option<&str>,
    ) -> Result<bool, CliError> {
        let ns = parse_norms(&read(norms)?)?;
        let t = bind_trace(&trace_literal(trace)?, ts, &ns.props())?;
        let verdict = classify_trace(&ns, &t)?;
        if self.structured() {
            self.emit(&ClassifyRecord {
                record: "classify",
                trace: t.to_string(),
                verdict: &verdict,
            })?;
        } else {
            writeln!(self.out, "trace: {t}")?;
            self.verdict_lines(&verdict)?;
        }
        Ok(verdict.status != Status::NonCompliant)
    }

    fn verdict_lines(&mut self, v: &ComplianceVerdict) -> Result<(), CliError> {
        writeln!(self.out, "status: {}", v.status)?;
        for x in &v.violations {
            match x.compensation_position {
                Some(k) => writeln!(
                    self.out,
                    "violation: {} at {}, compensated at {k}",
                    x.norm, x.position
                )?,
                None => writeln!(
                    self.out,
                    "violation: {} at {}, not compensated",
                    x.norm, x.position
                )?,
            }
        }
        for (pos, set) in v.in_force.iter().enumerate() {
            let names: Vec<String> = set.iter().map(|n| n.to_string()).collect();
            writeln!(self.out, "in force at {pos}: {}", names.join(" "))?;
        }
        Ok(())
    }

    fn rewrite(&mut self, conditionals: &str, overrides: &str) -> Result<bool, CliError> {
        let cs = parse_conditionals(&read(conditionals)?)?;
        let pairs = parse_overrides(&read(overrides)?)?;
        let rewritten = apply_overrides(&cs, &pairs)?;
        let labels: Vec<String> = (1..=rewritten.len()).map(|i| format!("C{i}")).collect();
        let fs: Vec<Formula> = rewritten.iter().map(|c| c.to_formula()).collect();
        if self.structured() {
            self.formula_lines(&labels, &fs)?;
        } else {
            for f in &fs {
                writeln!(self.out, "{f}")?;
            }
        }
        Ok(true)
    }

    fn equiv(
        &mut self,
        f: &str,
        g: &str,
        props: &PropositionSet,
        b: Bounds,
    ) -> Result<bool, CliError> {
        let (f, g) = (parse_formula(f)?, parse_formula(g)?);
        let r = brute_force_equiv(&f, &g, props, b.max_prefix, b.max_loop)?;
        if self.structured() {
            let cx = r.counterexample.as_ref();
            self.emit(&EquivRecord {
                record: "equiv",
                f: f.to_string(),
                g: g.to_string(),
                bounds: b,
                traces_checked: r.traces_checked,
                equivalent: r.equivalent,
                counterexample: cx.map(|c| c.0.to_string()),
                f_value: cx.map(|c| c.1),
                g_value: cx.map(|c| c.2),
            })?;
        } else if let Some((t, fv, gv)) = &r.counterexample {
            writeln!(self.out, "equivalent: no")?;
            writeln!(self.out, "counterexample: {t}")?;
            writeln!(self.out, "f: {fv}")?;
            writeln!(self.out, "g: {gv}")?;
        } else {
            writeln!(
                self.out,
                "equivalent: yes ({} traces, bounds {b})",
                r.traces_checked
            )?;
        }
        Ok(r.equivalent)
    }

    fn sat(&mut self, f: &str, props: &PropositionSet, b: Bounds) -> Result<bool, CliError> {
        let f = parse_formula(f)?;
        let w = satisfiable_within(&f, props, b.max_prefix, b.max_loop)?;
        if self.structured() {
            self.emit(&SatRecord {
                record: "sat",
                f: f.to_string(),
                bounds: b,
                satisfiable: w.is_some(),
                witness: w.as_ref().map(|t| t.to_string()),
            })?;
        } else if let Some(t) = &w {
            writeln!(self.out, "satisfiable: yes")?;
            writeln!(self.out, "witness: {t}")?;
        } else {
            writeln!(self.out, "satisfiable: no (bounds {b})")?;
        }
        Ok(w.is_some())
    }

    fn table1(
        &mut self,
        norms: Option<&str>,
        bounds: Bounds,
        records: Option<&str>,
    ) -> Result<bool, CliError> {
        let text = match norms {
            Some(p) => read(p)?,
            None => PRIVACY_NORMS.to_string(),
        };
        let ns: NormSet = parse_norms(&text)?;
        let report = table1_check(&ns, bounds, self.jobs)?;
        if let Some(path) = records {
            let mut body = String::new();
            for row in &report.rows {
                body.push_str(&serde_json::to_string(row).expect("records serialize"));
                body.push('\n');
            }
            std::fs::write(path, body).map_err(|source| CliError::Read {
                path: path.to_string(),
                source,
            })?;
        }
        if self.structured() {
            for row in &report.rows {
                self.emit(row)?;
            }
            return Ok(report.is_consistent());
        }
        writeln!(
            self.out,
            "{} traces over {{A,B,C,D}}, bounds {}{}",
            report.traces,
            report.bounds,
            if bounds == TABLE1_BOUNDS {
                ""
            } else {
                " (non-default)"
            }
        )?;
        writeln!(
            self.out,
            "{:<12} {:<17} {:<40} {:>7}  result",
            "minimal set", "expected", "observed", "matched"
        )?;
        for row in &report.rows {
            let observed: Vec<String> = row.observed.iter().map(|s| s.to_string()).collect();
            writeln!(
                self.out,
                "{:<12} {:<17} {:<40} {:>7}  {}",
                row.minimal_set,
                row.expected.to_string(),
                observed.join(","),
                row.matched,
                if row.mismatch.is_some() {
                    "MISMATCH"
                } else {
                    "ok"
                }
            )?;
            if let Some(w) = &row.witness {
                writeln!(self.out, "  witness: {w}")?;
            }
            if let Some(m) = &row.mismatch {
                writeln!(self.out, "  mismatch: {m}")?;
            }
        }
        let counts: BTreeSet<String> = report
            .status_counts
            .iter()
            .map(|(s, n)| format!("{s}={n}"))
            .collect();
        writeln!(
            self.out,
            "status counts: {}",
            counts.into_iter().collect::<Vec<_>>().join(" ")
        )?;
        writeln!(
            self.out,
            "reference disagreements: {}",
            report.engine_disagreements
        )?;
        writeln!(
            self.out,
            "rows confirmed: {}/{}",
            report.rows.len() - report.mismatches(),
            report.rows.len()
        )?;
        Ok(report.is_consistent())
    }

    fn paradox(&mut self) -> Result<bool, CliError> {
        let ns = parse_norms(PRIVACY_NORMS)?;
        let ts = parse_ts(PRIVACY_TS)?;
        let TraceLiteral::States { prefix, cycle } = TraceLiteral::parse(PRIVACY_PATH)? else {
            return Err(CliError::Input("bundled path must list state ids".into()));
        };
        let bounds = ts.default_bounds();
        let r = paradox_report(&ns, &ts, &prefix, &cycle, bounds)?;
        let path = format!("prefix: {} ; loop: {}", prefix.join(" "), cycle.join(" "));
        if self.structured() {
            self.emit(&ParadoxRecord {
                record: "paradox",
                ltl_satisfied: r.ltl_satisfied,
                path,
                trace: r.trace.to_string(),
                status: r.deontic.status,
                violations: &r.deontic.violations,
                discrepancy: r.discrepancy,
            })?;
            return Ok(!r.discrepancy);
        }
        writeln!(self.out, "norms:")?;
        for line in ns.to_string().lines() {
            writeln!(self.out, "  {line}")?;
        }
        writeln!(self.out, "compiled formulas:")?;
        for (i, f) in r.formulas.iter().enumerate() {
            writeln!(self.out, "  N{}  {f}", i + 1)?;
        }
        writeln!(self.out, "temporal reading (bounds {bounds}):")?;
        for (name, report) in &r.model {
            let v = &report.verdict;
            writeln!(
                self.out,
                "  state {name}: {} ({})",
                if v.holds { "holds" } else { "fails" },
                verdict_note(v)
            )?;
        }
        writeln!(
            self.out,
            "  {}",
            if r.ltl_satisfied {
                "satisfied at every state"
            } else {
                "not satisfied"
            }
        )?;
        writeln!(self.out, "deontic reading of {path}:")?;
        writeln!(self.out, "  trace: {}", r.trace)?;
        writeln!(self.out, "  status: {}", r.deontic.status)?;
        for x in &r.deontic.violations {
            match x.compensation_position {
                Some(k) => writeln!(
                    self.out,
                    "  {} violated at {}, compensated at {k}",
                    x.norm, x.position
                )?,
                None => writeln!(
                    self.out,
                    "  {} violated at {}, not compensated",
                    x.norm, x.position
                )?,
            }
        }
        writeln!(
            self.out,
            "DISCREPANCY: {}",
            if r.discrepancy { "yes" } else { "no" }
        )?;
        Ok(!r.discrepancy)
    }
}

fn verdict_note(v: &ModelVerdict) -> String {
    format!(
        "{} lassos, {}",
        v.lassos_checked,
        if v.exhaustive {
            "exhaustive"
        } else {
            "bounded"
        }
    )
}
