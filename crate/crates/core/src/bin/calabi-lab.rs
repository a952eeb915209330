use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use calabi_lab::report::{emit_plot_data, execute, run, Overrides, RunConfig, VerificationReport};
use calabi_lab::Error;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(version, about = "Checks Φ = -2 Cal on the unit disc")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured experiments and write the report.
    Run {
        config: PathBuf,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
    /// Run the configured experiments and print only the assertions.
    Check {
        config: PathBuf,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
    /// Write CSV plot data for a finished report.
    Plot { report: PathBuf, outdir: PathBuf },
}

#[derive(Args)]
struct OverrideArgs {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
}

impl From<OverrideArgs> for Overrides {
    fn from(a: OverrideArgs) -> Self {
        Overrides {
            seed: a.seed,
            samples: a.samples,
            workers: a.workers,
        }
    }
}

fn print_assertions(report: &VerificationReport) {
    for a in &report.findings.assertions {
        let mark = if a.passed { "PASS" } else { "FAIL" };
        println!("{mark} {:<30} {:.3e} <= {:.3e}", a.name, a.value, a.threshold);
    }
    if let Some(e) = &report.findings.error {
        println!("DIVERGED {e}");
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let numeric = e.downcast_ref::<Error>().is_some_and(Error::is_numeric);
            ExitCode::from(if numeric { 3 } else { 2 })
        }
    }
}

fn dispatch(command: Command) -> anyhow::Result<u8> {
    match command {
        Command::Run { config, overrides } => {
            let report = run(&config, &overrides.into()).with_context(|| format!("running {}", config.display()))?;
            if report.config.output.report.is_none() {
                println!("{}", report.to_json());
            } else {
                print_assertions(&report);
            }
            Ok(report.status().exit_code() as u8)
        }
        Command::Check { config, overrides } => {
            let mut cfg = RunConfig::load(&config).with_context(|| format!("loading {}", config.display()))?;
            cfg.apply(&overrides.into());
            let report = execute(&cfg)?;
            print_assertions(&report);
            Ok(report.status().exit_code() as u8)
        }
        Command::Plot { report, outdir } => {
            let report = VerificationReport::load(&report).with_context(|| format!("reading {}", report.display()))?;
            for path in emit_plot_data(&report, &outdir)? {
                println!("{}", path.display());
            }
            Ok(0)
        }
    }
}
