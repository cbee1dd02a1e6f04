use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use circlesort::adjsort::{f_formula, sort_cyclic_detailed, CaseTag, Direction};
use circlesort::allswaps::{lower_bound_t, t_class, t_exhaustive, LowerBound, Perm};
use circlesort::oracle::{self, distance_table, state_count, Mode, SearchConfig};
use circlesort::report::BoundReport;
use circlesort::verify::{run_suite, Suite, SuiteReport};
use circlesort::{Arrangement, Error};

const EXIT_VERIFY: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "circlesort",
    version,
    about = "Sort labeled points on a circle and check swap-count bounds"
)]
struct Cli {
    /// Directory for cached distance tables.
    #[arg(long, global = true, env = "CIRCLESORT_CACHE")]
    cache_dir: Option<PathBuf>,
    /// Refuse searches over more states than this.
    #[arg(long, global = true, default_value_t = 500_000_000)]
    max_states: u64,
    /// Emit CSV instead of JSON (tabular commands only).
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ModeArg {
    Adjacent,
    Allswap,
    Affine,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Adjacent => Mode::Adjacent,
            ModeArg::Allswap => Mode::AllSwap,
            ModeArg::Affine => Mode::Affine,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum SuiteArg {
    Upper,
    Lower,
    Allswap,
    Conjectures,
    P31,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Upper => Suite::Upper,
            SuiteArg::Lower => Suite::Lower,
            SuiteArg::Allswap => Suite::AllSwap,
            SuiteArg::Conjectures => Suite::Conjectures,
            SuiteArg::P31 => Suite::P31,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sort an arrangement with adjacent swaps.
    Sort {
        /// Space-separated labels, e.g. "5 4 3 2 1".
        #[arg(long)]
        perm: String,
    },
    /// Exact distance of an arrangement to the trivial class.
    Dist {
        #[arg(long)]
        perm: String,
        #[arg(long, value_enum, default_value = "adjacent")]
        mode: ModeArg,
        /// Cross-check the all-swaps coset formula against breadth-first search.
        #[arg(long)]
        bfs: bool,
    },
    /// Diameter of the swap graph for one circle size.
    Diam {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "adjacent")]
        mode: ModeArg,
    },
    /// Diameter and distance histogram for every size up to max-n.
    Table {
        #[arg(long)]
        max_n: usize,
        #[arg(long, value_enum, default_value = "adjacent")]
        mode: ModeArg,
    },
    /// Exact all-swaps sorting times t(n).
    Tvalues {
        #[arg(long)]
        max_n: usize,
    },
    /// Known formulas and bounds for one circle size.
    Bounds {
        #[arg(long)]
        n: u64,
        /// Also run the exact searches.
        #[arg(long)]
        oracle: bool,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long)]
        max_n: Option<usize>,
    },
}

#[derive(Debug, Serialize, Deserialize)]
struct Report<I, R> {
    tool: String,
    version: String,
    command: String,
    input: I,
    result: R,
}

#[derive(Debug, Serialize, Deserialize)]
struct SortResult {
    n: usize,
    case: Option<CaseTag>,
    direction: Option<Direction>,
    /// Vertex `p` of each swap `(p, p+1 mod n)`.
    moves: Vec<usize>,
    length: usize,
    bound: u64,
    sorted: Arrangement,
}

#[derive(Debug, Serialize, Deserialize)]
struct DistResult {
    n: usize,
    mode: Mode,
    distance: u32,
    /// Breadth-first distance when a cross-check was requested.
    bfs_distance: Option<u32>,
    agrees: Option<bool>,
    shift_cycle_counts: Option<Vec<usize>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct DiamResult {
    n: usize,
    mode: Mode,
    states: u128,
    diameter: u32,
    /// `floor((n-1)^2/4)` for adjacent and affine modes, `n - 2` for all swaps.
    formula: u64,
    matches_formula: bool,
}

#[derive(Debug, Serialize, Deserialize)]
struct TableRow {
    n: usize,
    mode: Mode,
    states: u128,
    diameter: u32,
    formula: u64,
    histogram: Vec<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TRow {
    n: usize,
    t_n: usize,
    n_minus_2: usize,
    is_prime: bool,
    argmax_class: Vec<usize>,
    lower_bounds: Vec<LowerBound>,
}

fn diameter_formula(n: usize, mode: Mode) -> u64 {
    match mode {
        Mode::AllSwap => n.saturating_sub(2) as u64,
        _ => f_formula(n as u64),
    }
}

fn parse_perm(s: &str) -> Result<Arrangement, Error> {
    s.parse()
}

fn emit<I: Serialize, R: Serialize>(command: &str, input: I, result: R) -> Result<(), Error> {
    let report = Report {
        tool: "circlesort".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: command.to_string(),
        input,
        result,
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    serde_json::to_writer_pretty(&mut out, &report).map_err(|e| Error::Internal(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn emit_csv(header: &[&str], rows: Vec<Vec<String>>) -> Result<(), Error> {
    let mut w = csv::Writer::from_writer(io::stdout());
    let csv_err = |e: csv::Error| Error::Internal(e.to_string());
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

/// Returns the exit code to use on success; errors map to their own codes.
fn run(cli: Cli) -> Result<u8, Error> {
    let cfg = SearchConfig {
        max_states: cli.max_states,
        cache_path: cli.cache_dir.clone(),
    };
    let tabular = matches!(cli.command, Command::Table { .. } | Command::Tvalues { .. });
    if cli.csv && !tabular {
        return Err(Error::Validation(
            "--csv is only available for table and tvalues".into(),
        ));
    }
    match cli.command {
        Command::Sort { perm } => {
            let a = parse_perm(&perm)?;
            let out = sort_cyclic_detailed(&a);
            let sorted = a.replay(&out.sequence)?;
            let moves = out.sequence.pairs().into_iter().map(|(p, _)| p).collect();
            let n = a.len();
            let result = SortResult {
                n,
                case: out.split.as_ref().map(|_| out.case),
                direction: out.chosen,
                moves,
                length: out.sequence.len(),
                bound: f_formula(n as u64),
                sorted,
            };
            emit("sort", serde_json::json!({ "perm": a }), result)?;
        }
        Command::Dist { perm, mode, bfs } => {
            let a = parse_perm(&perm)?;
            let mode = Mode::from(mode);
            let result = if mode == Mode::AllSwap {
                let rep = t_class(&Perm::from_arrangement(&a));
                let d = rep.t_value as u32;
                let bfs_distance = if bfs {
                    Some(oracle::distance(&a, mode, &cfg)?)
                } else {
                    None
                };
                DistResult {
                    n: a.len(),
                    mode,
                    distance: d,
                    bfs_distance,
                    agrees: bfs_distance.map(|b| b == d),
                    shift_cycle_counts: Some(rep.shift_cycle_counts),
                }
            } else {
                let d = oracle::distance(&a, mode, &cfg)?;
                DistResult {
                    n: a.len(),
                    mode,
                    distance: d,
                    bfs_distance: None,
                    agrees: None,
                    shift_cycle_counts: None,
                }
            };
            let disagree = result.agrees == Some(false);
            emit(
                "dist",
                serde_json::json!({ "perm": a, "mode": mode, "bfs": bfs }),
                result,
            )?;
            if disagree {
                return Ok(EXIT_VERIFY);
            }
        }
        Command::Diam { n, mode } => {
            let mode = Mode::from(mode);
            let table = distance_table(n, mode, &cfg)?;
            let formula = diameter_formula(n, mode);
            let diameter = table.diameter();
            let result = DiamResult {
                n,
                mode,
                states: state_count(n, mode),
                diameter,
                formula,
                matches_formula: u64::from(diameter) == formula,
            };
            emit("diam", serde_json::json!({ "n": n, "mode": mode }), result)?;
        }
        Command::Table { max_n, mode } => {
            let mode = Mode::from(mode);
            let rows = (1..=max_n)
                .map(|n| {
                    let table = distance_table(n, mode, &cfg)?;
                    Ok(TableRow {
                        n,
                        mode,
                        states: state_count(n, mode),
                        diameter: table.diameter(),
                        formula: diameter_formula(n, mode),
                        histogram: table.histogram().to_vec(),
                    })
                })
                .collect::<Result<Vec<_>, Error>>()?;
            if cli.csv {
                let rows = rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.n.to_string(),
                            r.mode.name().to_string(),
                            r.states.to_string(),
                            r.diameter.to_string(),
                            r.formula.to_string(),
                            join(&r.histogram, ";"),
                        ]
                    })
                    .collect();
                emit_csv(
                    &["n", "mode", "states", "diameter", "formula", "histogram"],
                    rows,
                )?;
            } else {
                emit(
                    "table",
                    serde_json::json!({ "max_n": max_n, "mode": mode }),
                    rows,
                )?;
            }
        }
        Command::Tvalues { max_n } => {
            let rows = (2..=max_n)
                .map(|n| {
                    let rec = t_exhaustive(n, cfg.max_states)?;
                    Ok(TRow {
                        n,
                        t_n: rec.t_n,
                        n_minus_2: n - 2,
                        is_prime: rec.is_prime,
                        argmax_class: rec.argmax_class.to_arrangement().into_labels(),
                        lower_bounds: lower_bound_t(n as u64),
                    })
                })
                .collect::<Result<Vec<_>, Error>>()?;
            if cli.csv {
                let rows = rows
                    .iter()
                    .map(|r| {
                        let bounds: Vec<String> = r
                            .lower_bounds
                            .iter()
                            .map(|b| {
                                let source = serde_json::to_value(b.source).expect("plain enum");
                                format!("{}={}", source.as_str().unwrap_or("?"), b.value)
                            })
                            .collect();
                        vec![
                            r.n.to_string(),
                            r.t_n.to_string(),
                            r.n_minus_2.to_string(),
                            r.is_prime.to_string(),
                            join(&r.argmax_class, " "),
                            bounds.join(";"),
                        ]
                    })
                    .collect();
                emit_csv(
                    &[
                        "n",
                        "t_n",
                        "n_minus_2",
                        "is_prime",
                        "argmax_class",
                        "lower_bounds",
                    ],
                    rows,
                )?;
            } else {
                emit("tvalues", serde_json::json!({ "max_n": max_n }), rows)?;
            }
        }
        Command::Bounds { n, oracle } => {
            if n == 0 {
                return Err(Error::Validation("n must be positive".into()));
            }
            let report = if oracle {
                BoundReport::with_oracle(n, &cfg)?
            } else {
                BoundReport::formulas(n)
            };
            emit(
                "bounds",
                serde_json::json!({ "n": n, "oracle": oracle }),
                report,
            )?;
        }
        Command::Verify { suite, max_n } => {
            let report: SuiteReport = run_suite(suite.into(), max_n, &cfg)?;
            for check in &report.checks {
                eprintln!("{check}");
            }
            let passed = report.passed();
            emit(
                "verify",
                serde_json::json!({ "suite": suite, "max_n": report.max_n }),
                &report,
            )?;
            if !passed {
                return Ok(EXIT_VERIFY);
            }
        }
    }
    Ok(0)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Validation(_)
        | Error::OutOfRange { .. }
        | Error::SizeMismatch { .. }
        | Error::Domain(_) => EXIT_INPUT,
        Error::Budget { .. } => EXIT_BUDGET,
        Error::Internal(_) | Error::Cache(_) | Error::Io(_) => EXIT_VERIFY,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
