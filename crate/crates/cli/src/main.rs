use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use triad_cli::config::{Format, Mode, RunConfig, ValidateConfig};
use triad_cli::{run, run_file, CliError, RunOptions};

#[derive(Parser)]
#[command(name = "triad", about = "Three-photon interference scans and validation")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a JSON configuration.
    Run {
        config: PathBuf,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Compare the permanent formula with the Fock-space oracle.
    Validate {
        #[arg(long, default_value_t = 500)]
        instances: usize,
        #[arg(long, default_value_t = 4)]
        max_photons: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write validation.json and metadata.json here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Print the library version.
    Version,
}

fn validate_config(instances: usize, max_photons: usize, seed: u64) -> Result<RunConfig, CliError> {
    let mut c = RunConfig::from_json(r#"{"mode":"validate"}"#)?;
    c.mode = Mode::Validate;
    c.validate = ValidateConfig { instances, max_photons };
    c.seed = seed;
    Ok(c)
}

fn execute(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
    }
    let summary = match cli.command {
        Command::Version => {
            println!("triad {}", triad_core::VERSION);
            return Ok(());
        }
        Command::Run { config, format, out_dir } => run_file(&config, &RunOptions { format, out_dir })?,
        Command::Validate { instances, max_photons, seed, out_dir } => {
            let config = validate_config(instances, max_photons, seed)?;
            match out_dir {
                Some(dir) => run(config, &RunOptions { format: None, out_dir: Some(dir) })?,
                None => {
                    let r = triad_core::oracle::oracle_equivalence(instances, max_photons, seed)?;
                    println!(
                        "oracle equivalence: {} instances, {} events, max deviation {:.3e}",
                        r.instances, r.events, r.max_deviation
                    );
                    if !(r.max_deviation < triad_cli::run::VALIDATION_TOLERANCE) {
                        return Err(CliError::Numerical(format!("max deviation {:.3e}", r.max_deviation)));
                    }
                    return Ok(());
                }
            }
        }
    };
    for m in &summary.messages {
        println!("{m}");
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
