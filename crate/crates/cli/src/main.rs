use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use semchan_cli::catalog;
use semchan_cli::config::{CountsSpec, ScenarioConfig, TestSpec};
use semchan_cli::error::{CliError, EXIT_MISMATCH, EXIT_OK};
use semchan_cli::output::{fmt_sig, TraceFormat};
use semchan_cli::run::{run_many, run_scenario, test_report, RunOptions, RunReport, TestError};

#[derive(Parser)]
#[command(
    name = "semchan",
    version,
    about = "Semantic channel scenarios and reproductions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Directory for result and trace files.
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    /// Trace file format.
    #[arg(long, global = true, value_enum, default_value_t = TraceFormat::Csv)]
    format: TraceFormat,
    /// Override the iteration cap of iterative scenarios.
    #[arg(long, global = true)]
    max_iters: Option<usize>,
    /// Override the stopping divergence (bits) of mixture scenarios.
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario config file.
    Run { config: PathBuf },
    /// Run built-in reproduction scenarios.
    Repro {
        #[arg(long, conflicts_with = "id", required_unless_present = "id")]
        all: bool,
        #[arg(long)]
        id: Option<String>,
    },
    /// Confirmation measures for a test or for example counts.
    Confirm {
        #[arg(long, requires_all = ["spec", "prevalence"], conflicts_with_all = ["np", "nc"])]
        sens: Option<f64>,
        #[arg(long, requires = "sens")]
        spec: Option<f64>,
        #[arg(long, requires = "sens")]
        prevalence: Option<f64>,
        #[arg(long, requires = "nc", required_unless_present = "sens")]
        np: Option<u64>,
        #[arg(long, requires = "np")]
        nc: Option<u64>,
    },
    /// List built-in reproduction scenarios.
    List,
}

fn print_report(r: &RunReport) {
    let verdict = match r.pass {
        Some(true) => "PASS",
        Some(false) => "FAIL",
        None if r.all_checks_pass() => "ok",
        None => "FAIL",
    };
    println!(
        "== {} [{}] {} ({:.1} ms)",
        r.id,
        r.kind,
        verdict,
        r.wall_time.as_secs_f64() * 1e3
    );
    for c in &r.checks {
        let actual = c.actual.map(fmt_sig).unwrap_or_else(|| "missing".into());
        println!(
            "   {:<4} {:<32} actual {:>12}  expected {:?} {} ± {} ({:?})",
            if c.pass { "ok" } else { "MISS" },
            c.quantity,
            actual,
            c.comparison,
            fmt_sig(c.expected),
            fmt_sig(c.tol),
            c.origin,
        );
    }
    for f in &r.files {
        println!("   wrote {}", f.display());
    }
}

fn finish(results: Vec<Result<RunReport, CliError>>) -> i32 {
    let mut code = EXIT_OK;
    for r in results {
        match r {
            Ok(report) => {
                print_report(&report);
                if !report.all_checks_pass() && code == EXIT_OK {
                    code = EXIT_MISMATCH;
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                code = code.max(e.exit_code());
            }
        }
    }
    code
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let opts = RunOptions {
        out_dir: cli.common.out_dir,
        format: cli.common.format,
        max_iters: cli.common.max_iters,
        tol: cli.common.tol,
    };
    match cli.command {
        Command::Run { config } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", config.display())))?;
            let cfg = ScenarioConfig::from_json(&text)?;
            Ok(finish(vec![run_scenario(&cfg, &opts)]))
        }
        Command::Repro { all, id } => {
            let configs = if all {
                catalog::load_all()?
            } else {
                vec![catalog::load(id.as_deref().unwrap_or_default())?]
            };
            Ok(finish(run_many(&configs, &opts)))
        }
        Command::Confirm {
            sens,
            spec,
            prevalence,
            np,
            nc,
        } => {
            let value = match (sens, spec, prevalence, np, nc) {
                (Some(sensitivity), Some(specificity), Some(prevalence), _, _) => {
                    let t = TestSpec {
                        sensitivity,
                        specificity,
                        prevalence,
                    };
                    let r = test_report(&t).map_err(|e| match e {
                        TestError::Config(m) => CliError::Config(m),
                        TestError::Core(e) => CliError::scenario("confirm", e),
                    })?;
                    serde_json::to_value(r).expect("serializes")
                }
                (_, _, _, Some(np), Some(nc)) => {
                    let c = CountsSpec { np, nc };
                    let r = semchan_core::confirmation::confirmation_from_counts(c.np, c.nc)
                        .map_err(|e| CliError::Config(e.to_string()))?;
                    serde_json::json!({ "np": np, "nc": nc, "result": r })
                }
                _ => {
                    return Err(CliError::Config(
                        "give --sens/--spec/--prevalence or --np/--nc".into(),
                    ))
                }
            };
            println!("{}", serde_json::to_string_pretty(&value).expect("json"));
            Ok(EXIT_OK)
        }
        Command::List => {
            for e in catalog::list_reproductions() {
                println!("{:<16} {:<12} {}", e.id, e.kind, e.description);
            }
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = run(cli).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}
