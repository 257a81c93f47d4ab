//! `analyze`: structural no-multiple-equilibria analysis of reaction
//! networks and rational matrices.
//!
//! Exit codes: 0 = analysis completed (whatever the verdicts), 2 =
//! parse/validation error, 3 = an enumeration budget stopped a requested
//! check.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use srgraph::matrix::DEFAULT_SUBMATRIX_BUDGET;
use srgraph::network::ReactionNetwork;
use srgraph::oracle::{run_oracle, OracleRunConfig};
use srgraph::report::{analyze, AnalysisOptions, AnalysisStatus, AnalysisSubject, CheckSelection};
use srgraph::StoichMatrix;

const EXIT_INPUT_ERROR: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "analyze",
    about = "Decide, from network structure alone, whether a reaction system can admit multiple equilibria",
    long_about = "Builds the SR graph and the exact stoichiometric matrix of a reaction network \
(or any rational matrix), classifies cycles, checks Condition (*) and the SSD / signed-determinant \
properties, and reports whether multiple equilibria are ruled out. All arithmetic is exact."
)]
struct Args {
    /// Reaction network file (one reaction per line, e.g. `2 A + B <-> C`).
    #[arg(long, value_name = "FILE", conflicts_with = "matrix")]
    input: Option<PathBuf>,

    /// Rational matrix file (whitespace/comma separated `p/q` or integer
    /// entries, one row per line).
    #[arg(long, value_name = "FILE")]
    matrix: Option<PathBuf>,

    /// Which analyses to run: star, ssd, signed-det, o-cycles or all.
    #[arg(long, value_name = "CHECK", default_value = "all", value_parser = parse_check)]
    check: CheckSelection,

    /// Report format on stdout.
    #[arg(long, value_name = "FORMAT", default_value = "text")]
    report: ReportFormat,

    /// Write the SR graph in DOT format, with failure witnesses highlighted.
    #[arg(long, value_name = "FILE")]
    dot: Option<PathBuf>,

    /// Cap on enumerated cycle length; hitting it withholds cycle verdicts.
    #[arg(long, value_name = "N")]
    max_cycle_len: Option<usize>,

    /// Cap on the number of square submatrices the exhaustive checks visit.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_SUBMATRIX_BUDGET)]
    submatrix_budget: u64,

    /// Seed for --oracle.
    #[arg(long, value_name = "N", default_value_t = 1)]
    seed: u64,

    /// Run the random cross-validation harness instead of analyzing a file;
    /// prints a JSON summary.
    #[arg(long)]
    oracle: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

fn parse_check(s: &str) -> Result<CheckSelection, String> {
    s.parse()
}

fn main() -> ExitCode {
    let args = Args::parse();

    if args.oracle {
        let config = OracleRunConfig {
            seed: args.seed,
            budget: args.submatrix_budget,
            ..OracleRunConfig::default()
        };
        let summary = run_oracle(&config);
        let mut json = serde_json::to_string_pretty(&summary).expect("summary serializes");
        json.push('\n');
        print!("{json}");
        return ExitCode::SUCCESS;
    }

    let subject = match load_subject(&args) {
        Ok(subject) => subject,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(EXIT_INPUT_ERROR);
        }
    };

    let opts = AnalysisOptions {
        checks: args.check,
        max_cycle_len: args.max_cycle_len,
        submatrix_budget: args.submatrix_budget,
    };
    let result = analyze(&subject, &opts);

    match args.report {
        ReportFormat::Text => print!("{}", result.report.to_text()),
        ReportFormat::Json => print!("{}", result.report.to_json()),
    }

    if let Some(path) = &args.dot {
        match &result.graph {
            Some(graph) => {
                let dot = graph.to_dot(&result.highlight_cycles);
                if let Err(e) = std::fs::write(path, dot) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(EXIT_INPUT_ERROR);
                }
            }
            None => {
                eprintln!("error: no graph to render (input was rejected)");
            }
        }
    }

    match result.status {
        AnalysisStatus::Complete => ExitCode::SUCCESS,
        AnalysisStatus::InvalidInput => {
            eprintln!("error: input rejected; see report for the violations");
            ExitCode::from(EXIT_INPUT_ERROR)
        }
        AnalysisStatus::BudgetExceeded => {
            eprintln!("error: a requested check was stopped by its budget; see report");
            ExitCode::from(EXIT_BUDGET)
        }
    }
}

fn load_subject(args: &Args) -> Result<AnalysisSubject, String> {
    match (&args.input, &args.matrix) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let net = ReactionNetwork::parse(&text)
                .map_err(|e| format!("{}: {e}", path.display()))?;
            Ok(AnalysisSubject::Network(net))
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let matrix = StoichMatrix::parse(&text)
                .map_err(|e| format!("{}: {e}", path.display()))?;
            Ok(AnalysisSubject::Matrix(matrix))
        }
        (None, None) => Err("one of --input or --matrix is required (or --oracle)".to_string()),
        (Some(_), Some(_)) => unreachable!("clap enforces the conflict"),
    }
}
