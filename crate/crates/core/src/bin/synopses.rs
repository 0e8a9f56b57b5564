use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use serde::Serialize;

use vessel_synopses::harness::{self, Objective, TuneRequest};
use vessel_synopses::Error;

/// Critical-point compression of AIS vessel trajectories.
#[derive(Debug, Parser)]
#[command(name = "synopses", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compress a dataset and write the synopsis and its metrics.
    Compress {
        #[arg(long)]
        input: PathBuf,
        /// JSON config file, `default`, or `tuned:<type>`. Defaults apply when omitted.
        #[arg(long)]
        config: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tune parameters for one vessel type with k-fold cross-validation.
    #[command(group(ArgGroup::new("objective").args(["preset", "r"])))]
    Tune {
        #[arg(long)]
        input: PathBuf,
        /// Vessel type to tune for (lowercase label).
        #[arg(long = "type")]
        vessel_type: String,
        /// Objective preset; defaults to the preset named after the vessel type.
        #[arg(long)]
        preset: Option<String>,
        /// Objective offset added to the RMSE (meters).
        #[arg(long, requires = "n")]
        r: Option<f64>,
        /// Objective exponent.
        #[arg(long, requires = "r")]
        n: Option<f64>,
        #[arg(long, default_value_t = 6)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        population: usize,
        #[arg(long, default_value_t = 30)]
        generations: usize,
        /// Generations without improvement before stopping.
        #[arg(long, default_value_t = 10)]
        stagnation: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score two configurations on the same data.
    Compare {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "config-a")]
        config_a: String,
        #[arg(long = "config-b")]
        config_b: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the metrics of one configuration.
    Eval {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        config: Option<String>,
    },
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(value)?;
    match writeln!(io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Error::Stream(e)),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Compress { input, config, out } => {
            let report = harness::cmd_compress(&input, config.as_deref(), &out)?;
            print_json(&report)
        }
        Command::Eval { input, config } => print_json(&harness::cmd_eval(&input, config.as_deref())?),
        Command::Compare { input, config_a, config_b, out } => {
            print_json(&harness::cmd_compare(&input, &config_a, &config_b, &out)?)
        }
        Command::Tune { input, vessel_type, preset, r, n, k, seed, population, generations, stagnation, out } => {
            let objective = match (preset, r, n) {
                (_, Some(r), Some(n)) => Objective::Explicit { r, n },
                (Some(p), _, _) => Objective::Preset(p),
                _ => Objective::Preset(vessel_type.clone()),
            };
            let req = TuneRequest {
                k,
                seed,
                population_size: population,
                max_generations: generations,
                stagnation_limit: stagnation,
                ..TuneRequest::new(input, &vessel_type, objective, out)
            };
            print_json(&harness::cmd_tune(&req)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_usage() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
