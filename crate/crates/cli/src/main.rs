use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use semilat::enumeration::{self, EnumerationConfig, DEFAULT_CAP};
use semilat::report::{self, Annotations};
use semilat::semilattice::Maximality;
use semilat::theorem::verify_theorem;
use semilat::{enumerate_idempotents, make_et, reduce, semilattice_of_size, Semilattice};

/// Largest `n` accepted by `idempotents` (T(8) already has 41393 idempotents).
const IDEMPOTENT_LIST_CAP: usize = 8;

#[derive(Parser, Debug)]
#[command(
    name = "semilat",
    version,
    about = "Subsemilattices of the full transformation semigroup"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long = "out", global = true)]
    output: Option<PathBuf>,

    /// Threads for enumerate / spectrum / verify-theorem.
    #[arg(long, default_value_t = 1, global = true)]
    workers: usize,

    /// Enumeration feasibility cap (at most 6).
    #[arg(long, env = "SEMILAT_CAP", default_value_t = DEFAULT_CAP, global = true)]
    cap: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the idempotents of T(n).
    Idempotents {
        #[arg(long)]
        n: usize,
    },
    /// Emit the extremal semilattice E_t.
    Et {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
    },
    /// Check the semilattice axioms for the transformations in a file.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Decide maximality; print an extending idempotent if there is one.
    Maximal {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Anchor, star image and restriction to n−1 points.
    Reduce {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Natural order on elements, or the transitivity order on points.
    Order {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        transitivity: bool,
    },
    /// All maximal subsemilattices of T(n).
    Enumerate {
        #[arg(long)]
        n: usize,
    },
    /// Histogram of maximal-subsemilattice sizes.
    Spectrum {
        #[arg(long)]
        n: usize,
    },
    /// A subsemilattice of E_t with exactly m elements.
    MakeSize {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        m: usize,
    },
    /// Check the maximum-size results by exhaustive enumeration.
    VerifyTheorem {
        #[arg(long)]
        n: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
}

/// Outcome of a command: the report, and whether the verdict was a pass.
struct Outcome {
    report: String,
    passed: bool,
}

impl Outcome {
    fn ok(report: String) -> Self {
        Outcome {
            report,
            passed: true,
        }
    }
}

/// Usage-level failure (exit status 2).
#[derive(Debug)]
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(&cli, &outcome.report) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(cli: &Cli, report: &str) -> std::io::Result<()> {
    match &cli.output {
        Some(path) => fs::write(path, report),
        None => std::io::stdout().lock().write_all(report.as_bytes()),
    }
}

fn check_n(n: usize) -> Result<(), UsageError> {
    if n == 0 || n > semilat::MAX_POINTS {
        return Err(UsageError(format!(
            "n must be in [1, {}], got {n}",
            semilat::MAX_POINTS
        )));
    }
    Ok(())
}

fn config(cli: &Cli) -> Result<EnumerationConfig, UsageError> {
    Ok(EnumerationConfig::new(cli.cap, cli.workers)?)
}

fn no_csv(cli: &Cli, command: &str) -> Result<(), UsageError> {
    if cli.format == Format::Csv {
        return Err(UsageError(format!(
            "csv output is not available for {command}"
        )));
    }
    Ok(())
}

fn read_input(path: &Path) -> Result<report::ParsedInput, UsageError> {
    let text = fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
    report::parse_input(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn input_n(parsed: &report::ParsedInput, path: &Path) -> Result<usize, UsageError> {
    parsed
        .n()
        .ok_or_else(|| UsageError(format!("{}: no transformations", path.display())))
}

fn read_semilattice(path: &Path) -> Result<Semilattice, UsageError> {
    let parsed = read_input(path)?;
    let n = input_n(&parsed, path)?;
    Semilattice::verify(n, parsed.elements)
        .map_err(|v| UsageError(format!("{}: not a semilattice: {v}", path.display())))
}

fn run(cli: &Cli) -> Result<Outcome, UsageError> {
    match &cli.command {
        Command::Idempotents { n } => {
            no_csv(cli, "idempotents")?;
            check_n(*n)?;
            if *n > IDEMPOTENT_LIST_CAP {
                return Err(UsageError(format!(
                    "idempotent listing is limited to n <= {IDEMPOTENT_LIST_CAP}"
                )));
            }
            let list = enumerate_idempotents(*n)?;
            let report = match cli.format {
                Format::Json => pretty(&json!({"n": n, "count": list.len(), "idempotents": list})),
                _ => format!(
                    "count={}\n{}",
                    list.len(),
                    report::transformations_text(&list)
                ),
            };
            Ok(Outcome::ok(report))
        }
        Command::Et { n, t } => {
            no_csv(cli, "et")?;
            check_n(*n)?;
            let s = make_et(*n, *t)?;
            Ok(Outcome::ok(render_semilattice(cli, &s, Some(*t))))
        }
        Command::MakeSize { n, t, m } => {
            no_csv(cli, "make-size")?;
            check_n(*n)?;
            let s = semilattice_of_size(*n, *t, *m)?;
            Ok(Outcome::ok(render_semilattice(cli, &s, Some(*t))))
        }
        Command::Verify { input } => {
            no_csv(cli, "verify")?;
            let parsed = read_input(input)?;
            let n = parsed.n().unwrap_or(1);
            let verdict = Semilattice::verify(n, parsed.elements);
            let report = match (&verdict, cli.format) {
                (Ok(s), Format::Json) => pretty(&json!({"valid": true, "n": n, "size": s.len()})),
                (Err(v), Format::Json) => pretty(&json!({
                    "valid": false,
                    "axiom": v.axiom(),
                    "message": v.to_string(),
                })),
                (Ok(s), _) => format!("VALID: semilattice of size {} on {n} points\n", s.len()),
                (Err(v), _) => format!("INVALID ({}): {v}\n", v.axiom()),
            };
            Ok(Outcome {
                report,
                passed: verdict.is_ok(),
            })
        }
        Command::Maximal { input } => {
            no_csv(cli, "maximal")?;
            let s = read_semilattice(input)?;
            let all = enumerate_idempotents(s.n())?;
            let verdict = s.maximality(&all);
            let report = match (&verdict, cli.format) {
                (Maximality::Maximal, Format::Json) => {
                    pretty(&json!({"is_maximal": true, "witness": null}))
                }
                (Maximality::Extendable(f), Format::Json) => {
                    pretty(&json!({"is_maximal": false, "witness": f}))
                }
                (Maximality::Maximal, _) => "maximal: true\n".to_string(),
                (Maximality::Extendable(f), _) => format!("maximal: false\nwitness: {f}\n"),
            };
            Ok(Outcome {
                report,
                passed: verdict == Maximality::Maximal,
            })
        }
        Command::Reduce { input } => {
            no_csv(cli, "reduce")?;
            let s = read_semilattice(input)?;
            let r = reduce(&s)?;
            let report = match cli.format {
                Format::Json => report::reduction_json(&r),
                _ => report::reduction_text(&r),
            };
            Ok(Outcome {
                report,
                passed: r.counting_chain_holds(),
            })
        }
        Command::Order {
            input,
            transitivity,
        } => {
            no_csv(cli, "order")?;
            let s = read_semilattice(input)?;
            let report = match (transitivity, cli.format) {
                (true, Format::Json) => report::poset_json(&s.transitivity_order()),
                (true, _) => report::poset_text(&s.transitivity_order()),
                (false, Format::Json) => report::poset_json(&s.natural_order()),
                (false, _) => report::poset_text(&s.natural_order()),
            };
            Ok(Outcome::ok(report))
        }
        Command::Enumerate { n } => {
            no_csv(cli, "enumerate")?;
            check_n(*n)?;
            let list = enumeration::enumerate_maximal_semilattices(*n, &config(cli)?)?;
            let report = match cli.format {
                Format::Json => report::semilattices_json(&list),
                _ => {
                    let mut out = format!("n={n} maximal={}\n", list.len());
                    for s in &list {
                        out.push('\n');
                        out.push_str(&report::semilattice_text(s, None));
                    }
                    out
                }
            };
            Ok(Outcome::ok(report))
        }
        Command::Spectrum { n } => {
            check_n(*n)?;
            let spectrum = enumeration::spectrum(*n, &config(cli)?)?;
            let report = match cli.format {
                Format::Json => report::spectrum_json(&spectrum),
                Format::Csv => report::spectrum_csv(&spectrum),
                Format::Text => report::spectrum_text(&spectrum),
            };
            Ok(Outcome::ok(report))
        }
        Command::VerifyTheorem { n } => {
            no_csv(cli, "verify-theorem")?;
            check_n(*n)?;
            let clauses = verify_theorem(*n, &config(cli)?)?;
            let passed = clauses.iter().all(|c| c.passed);
            let report = match cli.format {
                Format::Json => pretty(&json!({"n": n, "passed": passed, "clauses": clauses})),
                _ => clauses
                    .iter()
                    .map(|c| {
                        let verdict = if c.passed { "PASS" } else { "FAIL" };
                        format!("{verdict} {}: {}\n", c.clause, c.detail)
                    })
                    .collect(),
            };
            Ok(Outcome { report, passed })
        }
    }
}

fn render_semilattice(cli: &Cli, s: &Semilattice, t: Option<usize>) -> String {
    match cli.format {
        Format::Json => report::semilattice_json(s, Annotations::default()),
        _ => report::semilattice_text(s, t),
    }
}

fn pretty(value: &serde_json::Value) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("json values serialize");
    out.push('\n');
    out
}
