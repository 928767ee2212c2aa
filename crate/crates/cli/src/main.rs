use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cli::{run, Experiment, RunOptions};

#[derive(Debug, Parser)]
#[command(name = "pmetric", version, about = "Run pressure, holonomy and disk-expansion experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Pressure, RPF data and derivative checks on a shift of finite type.
    Pressure(Common),
    /// Flow pressure of a suspension and derivative transfer to the shift.
    Suspension(Common),
    /// Trace formula, base frame and variation ODE checks along closed orbits.
    Holonomy(Common),
    /// Exact-rational vanishing verdicts for the disk recursion systems.
    Diskvanish(Common),
    /// Quick built-in checks against closed forms.
    Selftest(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// JSON config file with "schema": 1.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory for the reports.
    #[arg(long, value_name = "DIR", default_value = "out")]
    out: PathBuf,
    /// Seed overriding the config seed.
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    /// Print the main report as JSON on stdout.
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, common) = match cli.command {
        Command::Pressure(c) => (Experiment::Pressure, c),
        Command::Suspension(c) => (Experiment::Suspension, c),
        Command::Holonomy(c) => (Experiment::Holonomy, c),
        Command::Diskvanish(c) => (Experiment::Diskvanish, c),
        Command::Selftest(c) => (Experiment::Selftest, c),
    };
    let options = RunOptions {
        config: common.config,
        out: common.out,
        seed: common.seed,
    };
    match run(experiment, &options) {
        Ok(summary) => {
            if common.json {
                match serde_json::to_string_pretty(&summary.report) {
                    Ok(text) => println!("{text}"),
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(cli::EXIT_NUMERICAL);
                    }
                }
            } else {
                for file in &summary.files {
                    println!("wrote {}", file.display());
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
