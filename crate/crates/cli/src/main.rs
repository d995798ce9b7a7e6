use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hypermatch::format::{FormatError, Instance};
use hypermatch::generate::GenerateError;
use hypermatch::oracles::OracleError;
use num_rational::Ratio;
use thiserror::Error;

mod report;
mod run;
mod verify;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: FormatError },
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error("oracle: {0}")]
    Oracle(#[from] OracleError),
    #[error("{0}")]
    Algorithm(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) | CliError::Algorithm(_) => 1,
            CliError::Oracle(_) => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "hypermatch",
    version,
    about = "Matching, coloring and MIS by fractional rounding"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    RandomHypergraph,
    RandomGraph,
    DRegular,
    Star,
    Cycle,
    Path,
    Complete,
    LineGraphOf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    MaximalMatching,
    ApproxMatching,
    EdgeColor,
    ListEdgeColor,
    RandEdgeColor,
    Mis,
    VertexColor,
    ApproxGraphMatching,
    Orientation,
    PseudoForests,
    ArbEdgeColor,
}

impl Algo {
    pub fn name(self) -> String {
        self.to_possible_value()
            .map(|v| v.get_name().to_string())
            .unwrap_or_default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Matching,
    MaximalMatching,
    EdgeColoring,
    IndependentSet,
    MaximalIndependentSet,
    VertexColoring,
    Orientation,
    PseudoForests,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a generated instance.
    Generate(GenerateArgs),
    /// Run an algorithm, verify its output and print a report.
    Run(RunArgs),
    /// Check a solution file against an instance.
    Verify {
        #[arg(long)]
        kind: Kind,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        /// Color lists the solution must respect.
        #[arg(long)]
        lists: Option<PathBuf>,
        /// Out-degree bound for orientations.
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, clap::Args)]
pub struct GenerateArgs {
    #[arg(long)]
    family: FamilyName,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Rank for random hypergraphs.
    #[arg(long)]
    r: Option<usize>,
    /// Edge probability for random graphs.
    #[arg(long)]
    p: Option<f64>,
    /// Degree for regular graphs.
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    leaves: Option<usize>,
    /// Source instance for `line-graph-of`.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct RunArgs {
    #[arg(long)]
    pub algo: Algo,
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Solution file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Accuracy as a rational, e.g. `1/2`.
    #[arg(long, value_parser = parse_ratio)]
    pub eps: Option<Ratio<u64>>,
    /// Arboricity bound for orientations; the oracle value when absent.
    #[arg(long)]
    pub lambda: Option<usize>,
    /// Arboricity bound for `arb-edge-color`; the oracle value when absent.
    #[arg(long)]
    pub arboricity: Option<usize>,
    /// Stop the maximal matching driver early with this slack, leaving an
    /// almost maximal matching. Selects the almost-maximal mode of
    /// `approx-graph-matching`.
    #[arg(long)]
    pub slack: Option<f64>,
    /// Require the oracle comparison; fails with exit code 3 over budget.
    #[arg(long)]
    pub oracle: bool,
    /// Color lists (`id: c1 c2 ...`) for the list algorithms.
    #[arg(long)]
    pub lists: Option<PathBuf>,
    /// Print the JSON report instead of the text summary.
    #[arg(long)]
    pub json: bool,
}

fn parse_ratio(s: &str) -> Result<Ratio<u64>, String> {
    let bad = || format!("expected a positive rational like 1/2, got {s:?}");
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let num: u64 = num.parse().map_err(|_| bad())?;
    let den: u64 = den.parse().map_err(|_| bad())?;
    if den == 0 || num == 0 {
        return Err(bad());
    }
    Ok(Ratio::new(num, den))
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn parse_with<T>(
    path: &Path,
    text: &str,
    f: impl FnOnce(&str) -> Result<T, FormatError>,
) -> Result<T, CliError> {
    f(text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_instance(path: &Path) -> Result<Instance, CliError> {
    let text = read_text(path)?;
    parse_with(path, &text, hypermatch::format::parse_instance)
}

fn need<T>(v: Option<T>, flag: &str, family: FamilyName) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for {family:?}")))
}

fn generate_cmd(args: GenerateArgs) -> Result<(), CliError> {
    use hypermatch::generate::{generate, Family};
    let GenerateArgs {
        family,
        n,
        m,
        r,
        p,
        d,
        leaves,
        input,
        seed,
        out,
    } = args;
    let fam = match family {
        FamilyName::RandomHypergraph => Family::RandomHypergraph {
            n: need(n, "n", family)?,
            m: need(m, "m", family)?,
            r: need(r, "r", family)?,
        },
        FamilyName::RandomGraph => Family::RandomGraph {
            n: need(n, "n", family)?,
            p: need(p, "p", family)?,
        },
        FamilyName::DRegular => Family::Regular {
            n: need(n, "n", family)?,
            d: need(d, "d", family)?,
        },
        FamilyName::Star => Family::Star {
            leaves: need(leaves, "leaves", family)?,
        },
        FamilyName::Cycle => Family::Cycle {
            n: need(n, "n", family)?,
        },
        FamilyName::Path => Family::Path {
            n: need(n, "n", family)?,
        },
        FamilyName::Complete => Family::Complete {
            n: need(n, "n", family)?,
        },
        FamilyName::LineGraphOf => {
            let h = match read_instance(&need(input, "in", family)?)? {
                Instance::Graph(g) => g.to_hypergraph(),
                Instance::Hypergraph(h) => h,
            };
            Family::LineGraphOf(h)
        }
    };
    let text = match generate(&fam, seed)? {
        Instance::Graph(g) => hypermatch::format::write_graph(&g),
        Instance::Hypergraph(h) => hypermatch::format::write_hypergraph(&h),
    };
    match out {
        Some(path) => write_text(&path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(args) => generate_cmd(args),
        Command::Run(args) => run::run(&args).and_then(|report| {
            if args.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serializes")
                );
            } else {
                print!("{}", report.text_summary());
            }
            if report.passed() {
                Ok(())
            } else {
                let failed: Vec<&str> = report
                    .verdicts
                    .iter()
                    .filter(|v| !v.pass)
                    .map(|v| v.check.as_str())
                    .collect();
                Err(CliError::Verification(failed.join(", ")))
            }
        }),
        Command::Verify {
            kind,
            input,
            solution,
            lists,
            bound,
            json,
        } => verify::verify(kind, &input, &solution, lists.as_deref(), bound).and_then(|v| {
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&v).expect("verdict serializes")
                );
            } else {
                let tag = if v.pass { "pass" } else { "FAIL" };
                println!("[{tag}] {}: {}", v.check, v.detail);
            }
            if v.pass {
                Ok(())
            } else {
                Err(CliError::Verification(v.detail))
            }
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
