use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bellquasi::cli::{self, exit, AngleRange, Axes, PaperFixtures, Report, ScanSpec, SingletArgs};
use bellquasi::quasi::DEFAULT_EPS;

#[derive(Parser)]
#[command(
    name = "bellquasi",
    version,
    about = "Joint quasiprobabilities and Bell feasibility for pairwise marginals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one singlet measurement configuration.
    Singlet(SingletCmd),
    /// Map the violation region over coplanar angle grids (CSV).
    Scan(ScanCmd),
    /// Solve a marginal problem given as a JSON document.
    Solve(SolveCmd),
    /// Recompute the fixed Bell system and compare with reference values.
    PaperCheck(PaperCheckCmd),
}

#[derive(Args)]
struct SingletCmd {
    /// Coplanar axis angles in degrees, "a,b,c".
    #[arg(long, conflicts_with_all = ["alpha", "beta", "gamma"], allow_hyphen_values = true)]
    angles: Option<String>,
    /// Axis of A as "x,y,z".
    #[arg(long, requires_all = ["beta", "gamma"], allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Axis of B as "x,y,z".
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Axis of C as "x,y,z".
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
    #[arg(long, default_value_t = DEFAULT_EPS)]
    eps: f64,
    /// Rationalize correlations (denominator 10^6) and run exactly.
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ScanCmd {
    /// Angle of B from A in degrees, "start:end:step" (end exclusive).
    #[arg(long, default_value = "0:360:1")]
    theta_ab: String,
    /// Angle of C from A in degrees, "start:end:step" (end exclusive).
    #[arg(long, default_value = "0:360:1")]
    theta_ac: String,
    #[arg(long, default_value_t = DEFAULT_EPS)]
    eps: f64,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SolveCmd {
    path: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PaperCheckCmd {
    #[arg(long)]
    json: bool,
}

fn emit(report: Report, json: bool) -> ExitCode {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report.json).expect("json value")
        );
    } else if report.json.get("error").is_some() {
        eprint!("{}", report.text);
    } else {
        print!("{}", report.text);
    }
    ExitCode::from(report.exit_code as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Singlet(c) => {
            let axes = match (c.angles, c.alpha, c.beta, c.gamma) {
                (Some(a), None, None, None) => match cli::parse_angles(&a) {
                    Ok(a) => Axes::Angles(a),
                    Err(e) => return emit(Report::usage(e), c.json),
                },
                (None, Some(a), Some(b), Some(g)) => Axes::Vectors(a, b, g),
                _ => {
                    return emit(
                        Report::usage("give either --angles or all of --alpha/--beta/--gamma"),
                        c.json,
                    )
                }
            };
            let report = cli::cmd_singlet(&SingletArgs {
                axes,
                eps: c.eps,
                exact: c.exact,
            });
            emit(report, c.json)
        }
        Command::Scan(c) => {
            let ranges = AngleRange::parse(&c.theta_ab)
                .and_then(|ab| Ok((ab, AngleRange::parse(&c.theta_ac)?)));
            let (theta_ab, theta_ac) = match ranges {
                Ok(r) => r,
                Err(e) => return emit(Report::usage(e), c.json),
            };
            let report = cli::cmd_scan(&ScanSpec {
                theta_ab,
                theta_ac,
                eps: c.eps,
                out: c.out.clone(),
            });
            if c.json && c.out.is_none() && report.exit_code == exit::OK {
                // CSV goes to stdout; keep it parseable rather than mixing formats
                print!("{}", report.text);
                return ExitCode::SUCCESS;
            }
            emit(report, c.json)
        }
        Command::Solve(c) => {
            let report = match std::fs::read_to_string(&c.path) {
                Ok(doc) => cli::cmd_solve(&doc),
                Err(e) => Report::usage(format!("{}: {e}", c.path.display())),
            };
            emit(report, c.json)
        }
        Command::PaperCheck(c) => emit(cli::cmd_paper_check(&PaperFixtures::printed()), c.json),
    }
}
