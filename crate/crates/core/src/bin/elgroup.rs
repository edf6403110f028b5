use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use elgroup::cli::scenario::run_scenario_file;
use elgroup::cli::suites::{run_suite, suite_names};
use elgroup::cli::Report;

#[derive(Parser)]
#[command(name = "elgroup", version, about = "Exact elementary-generator computations driven by JSON scenarios")]
struct Cli {
    /// Print one line per check to stderr.
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and print its report.
    Run {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Run a randomized property suite.
    Suite {
        #[arg(long)]
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Bound on the magnitude of random parameters.
        #[arg(long, default_value_t = 5)]
        max_size: u32,
    },
    /// List the registered suites.
    Suites,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match cli.command {
        Command::Run { scenario } => run_scenario_file(&scenario),
        Command::Suite { name, seed, max_size } => {
            run_suite(&name, seed, max_size).unwrap_or_else(|e| Report::invalid(e.to_string()))
        }
        Command::Suites => {
            for name in suite_names() {
                println!("{name}");
            }
            return ExitCode::SUCCESS;
        }
    };
    if cli.verbose {
        for c in &report.checks {
            eprintln!("{} {}: {}", if c.pass { "ok  " } else { "FAIL" }, c.name, c.detail);
        }
    }
    // a closed pipe is not an error worth reporting
    let _ = writeln!(std::io::stdout(), "{}", report.to_json_string());
    ExitCode::from(report.exit_code() as u8)
}
