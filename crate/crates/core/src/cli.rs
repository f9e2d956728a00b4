//! Command-line front end. Each subcommand reads files, calls one library
//! operation and prints a report.
//!
//! Exit codes: 0 for success, `True` and `Unknown`; 1 for a definite `False`,
//! a counterexample, non-equivalence, a failed certification or no model in
//! scope; 2 for usage, file and format errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::equiv::{pebble_equivalent, EquivScope, Equivalence};
use crate::eval::{eval_bounded, eval_lasso, Verdict};
use crate::minsky::{parse_machine, run as run_machine, MinskyMachine};
use crate::model::{parse_model, write_model, Assignment, TraceModel};
use crate::parser::{parse_formula_file, print_formula, write_formula_file, FormulaFile};
use crate::satsearch::{check_validity_small_scope, find_model, SearchOutcome, SearchScope};
use crate::syntax::Alphabet;
use crate::translate::{canonical_model, certify_model, translate_machine, CertReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Structured,
}

#[derive(Debug, Args)]
struct Common {
    /// Report format.
    #[arg(long, value_enum, default_value = "plain", global = true)]
    format: Format,
}

#[derive(Debug, Parser)]
#[command(name = "pebble-ltl", version, about = "Temporal logic with predicate abstraction")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a formula file and print it in canonical form.
    Parse { formula: PathBuf },
    /// Evaluate a formula on a model at one moment.
    Eval {
        model: PathBuf,
        formula: PathBuf,
        #[arg(long, default_value_t = 0)]
        at: usize,
        /// Variable binding `x=element`; may be repeated.
        #[arg(long = "assign", value_parser = parse_binding)]
        assign: Vec<(String, String)>,
    },
    /// Check pebble equivalence of two models.
    Equiv {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, default_value_t = 1)]
        horizon: usize,
    },
    /// Run a Minsky machine from counters (0, 0).
    MinskyRun {
        machine: PathBuf,
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
    /// Print the sentence encoding a Minsky machine.
    Translate { machine: PathBuf },
    /// Check the encoding of a machine against its canonical model.
    Certify {
        machine: PathBuf,
        #[arg(long)]
        horizon: usize,
        /// Also write the canonical model here.
        #[arg(long)]
        emit_model: Option<PathBuf>,
        /// Also write the encoding formula here.
        #[arg(long)]
        emit_formula: Option<PathBuf>,
    },
    /// Small-scope search for a lasso model or a validity counterexample.
    Search {
        formula: PathBuf,
        #[arg(long, conflicts_with = "valid", required_unless_present = "valid")]
        sat: bool,
        #[arg(long)]
        valid: bool,
        #[arg(long, default_value_t = 2)]
        domain: usize,
        #[arg(long, default_value_t = 2)]
        prefix: usize,
        #[arg(long, default_value_t = 2)]
        period: usize,
        /// Maximum number of candidates.
        #[arg(long)]
        ceiling: Option<u128>,
    },
}

fn parse_binding(s: &str) -> Result<(String, String), String> {
    s.split_once('=')
        .map(|(v, e)| (v.trim().to_string(), e.trim().to_string()))
        .ok_or_else(|| format!("expected var=element, got {s:?}"))
}

/// A failure reported with exit code 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn read_formula(path: &Path) -> Result<FormulaFile, Failure> {
    parse_formula_file(&read(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn read_model(path: &Path) -> Result<TraceModel, Failure> {
    parse_model(&read(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn read_machine(path: &Path) -> Result<MinskyMachine, Failure> {
    parse_machine(&read(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

/// Output text and exit code.
struct Report {
    text: String,
    code: i32,
}

fn emit(format: Format, plain: String, structured: Value, code: i32) -> Report {
    let text = match format {
        Format::Plain => plain,
        Format::Structured => format!("{}\n", serde_json::to_string(&structured).expect("json")),
    };
    Report { text, code }
}

fn verdict_code(v: Verdict) -> i32 {
    if v == Verdict::False {
        1
    } else {
        0
    }
}

fn cert_json(r: &CertReport) -> Value {
    let rules: Vec<Value> = r
        .rules
        .iter()
        .map(|row| {
            json!({
                "rule": row.name,
                "verdicts": row.verdicts.iter().map(|(n, v)| json!([n, v.to_string()])).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "horizon": r.horizon,
        "no_violation": r.no_violation,
        "q_stop_seen_at": r.q_stop_seen_at,
        "halted": r.halted,
        "counter_checks": r.counter_checks,
        "counter_failures": r.counter_failures,
        "single_q": r.single_q_ok,
        "zero_test": r.zero_test_ok,
        "rules": rules,
    })
}

fn execute(cli: Cli) -> Result<Report, Failure> {
    let format = cli.common.format;
    match cli.command {
        Command::Parse { formula } => {
            let file = read_formula(&formula)?;
            let printed = print_formula(&file.formula);
            Ok(emit(
                format,
                format!("{printed}\n"),
                json!({
                    "formula": printed,
                    "sentence": file.formula.is_sentence(),
                    "size": file.formula.size(),
                    "depth": file.formula.depth(),
                }),
                0,
            ))
        }
        Command::Eval { model, formula, at, assign } => {
            let m = read_model(&model)?;
            let file = read_formula(&formula)?;
            let a: Assignment = assign.into_iter().collect();
            let (verdict, mode) = match m.lasso() {
                Some(_) => (Verdict::from(eval_lasso(&m, &file.formula, &a, at)?), "lasso"),
                None => (eval_bounded(&m, &file.formula, &a, at)?, "bounded"),
            };
            Ok(emit(
                format,
                format!("{verdict} ({mode}, position {at})\n"),
                json!({"verdict": verdict.to_string(), "mode": mode, "position": at}),
                verdict_code(verdict),
            ))
        }
        Command::Equiv { left, right, horizon } => {
            let (m1, m2) = (read_model(&left)?, read_model(&right)?);
            let result = pebble_equivalent(&m1, &m2, &EquivScope::new(horizon))?;
            Ok(match result {
                Equivalence::Equivalent { bounded } => {
                    let how = if bounded {
                        format!("up to moment {}", horizon - 1)
                    } else {
                        "at every moment".to_string()
                    };
                    emit(
                        format,
                        format!("pebble equivalent {how}\n"),
                        json!({"equivalent": true, "bounded": bounded, "horizon": horizon}),
                        0,
                    )
                }
                Equivalence::NotEquivalent(w) => emit(
                    format,
                    format!("not pebble equivalent: {w}\n"),
                    json!({
                        "equivalent": false,
                        "witness": {"moment": w.moment, "symbol": w.symbol, "tuple": w.tuple},
                    }),
                    1,
                ),
            })
        }
        Command::MinskyRun { machine, steps } => {
            if steps == 0 {
                return Err(Failure("--steps must be at least 1".into()));
            }
            let m = read_machine(&machine)?;
            let r = run_machine(&m, steps);
            let mut plain = String::from("step label S1 S2\n");
            for (j, s) in r.states.iter().enumerate() {
                plain.push_str(&format!("{j} {} {} {}\n", s.label, s.counters[0], s.counters[1]));
            }
            plain.push_str(&format!("halted: {}\n", r.halted));
            let states: Vec<Value> = r
                .states
                .iter()
                .map(|s| json!([s.label, s.counters[0], s.counters[1]]))
                .collect();
            Ok(emit(format, plain, json!({"states": states, "halted": r.halted}), 0))
        }
        Command::Translate { machine } => {
            let m = read_machine(&machine)?;
            let f = translate_machine(&m);
            let text = write_formula_file(&Alphabet::of(&f), &f);
            Ok(emit(format, text, json!({"formula": print_formula(&f)}), 0))
        }
        Command::Certify {
            machine,
            horizon,
            emit_model,
            emit_formula,
        } => {
            let m = read_machine(&machine)?;
            let model = canonical_model(&m, horizon)?;
            let report = certify_model(&m, &model, horizon)?;
            if let Some(path) = emit_model {
                write_file(&path, &write_model(&model))?;
            }
            if let Some(path) = emit_formula {
                let f = translate_machine(&m);
                write_file(&path, &write_formula_file(&Alphabet::of(&f), &f))?;
            }
            let code = if report.all_ok() { 0 } else { 1 };
            Ok(emit(format, report.to_string(), cert_json(&report), code))
        }
        Command::Search {
            formula,
            sat,
            valid: _,
            domain,
            prefix,
            period,
            ceiling,
        } => {
            let file = read_formula(&formula)?;
            let mut scope = SearchScope::new(domain, prefix, period);
            if let Some(c) = ceiling {
                scope.ceiling = c;
            }
            let report = if sat {
                find_model(&file.formula, &scope)?
            } else {
                check_validity_small_scope(&file.formula, &scope)?
            };
            let evaluations = report.evaluations;
            Ok(match (sat, report.outcome) {
                (true, SearchOutcome::Found(m)) => emit(
                    format,
                    format!("model found ({evaluations} evaluations)\n{}", write_model(&m)),
                    json!({"result": "model", "evaluations": evaluations, "model": write_model(&m)}),
                    0,
                ),
                (false, SearchOutcome::Found(m)) => emit(
                    format,
                    format!("counterexample found ({evaluations} evaluations)\n{}", write_model(&m)),
                    json!({"result": "counterexample", "evaluations": evaluations, "model": write_model(&m)}),
                    1,
                ),
                (true, SearchOutcome::NoneInScope) => emit(
                    format,
                    format!("no model in scope ({evaluations} evaluations); larger models may exist\n"),
                    json!({"result": "none-in-scope", "evaluations": evaluations}),
                    1,
                ),
                (false, SearchOutcome::NoneInScope) => emit(
                    format,
                    format!(
                        "no counterexample in scope ({evaluations} evaluations); this is not a proof of validity\n"
                    ),
                    json!({"result": "none-found", "evaluations": evaluations}),
                    0,
                ),
            })
        }
    }
}

/// Runs the command line `args` (program name first), writing the report to
/// `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(cli) {
        Ok(report) => {
            let _ = out.write_all(report.text.as_bytes());
            report.code
        }
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}
