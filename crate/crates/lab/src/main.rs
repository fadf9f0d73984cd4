use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use acp_lab::layout::read_config;
use acp_lab::{analyze, evolve, report, robustness, Result};

#[derive(Parser)]
#[command(name = "acp", version, about = "Evolve and analyze block-catching agents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every replicate of a config and write the run directory.
    Evolve {
        #[arg(long)]
        config: PathBuf,
    },
    /// Information analysis of each replicate's line of descent.
    Analyze {
        #[arg(long)]
        run: PathBuf,
    },
    /// Noise sweeps of each replicate's final agent.
    Robustness {
        #[arg(long)]
        run: PathBuf,
    },
    /// Aggregate analyzed runs into figure tables.
    Report {
        #[arg(long, num_args = 1.., required = true)]
        runs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Final score needed to count as a perfect performer.
        #[arg(long, default_value_t = 64)]
        min_correct: u32,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Evolve { config } => {
            let cfg = read_config(&config)?.with_env_overrides();
            for o in evolve::evolve(&cfg)? {
                println!("replicate {} seed {} final n_correct {}", o.replicate, o.seed, o.final_record.n_correct);
            }
            println!("wrote {}", cfg.output_dir.display());
        }
        Command::Analyze { run } => {
            let results = analyze::analyze_run(&run)?;
            let perfect = results.iter().filter(|a| a.perfect).count();
            println!("analyzed {} replicates, {perfect} perfect", results.len());
        }
        Command::Robustness { run } => {
            let results = robustness::robustness_run(&run)?;
            println!("swept {} agents", results.len());
        }
        Command::Report { runs, out, min_correct } => {
            report::report(&runs, &out, min_correct)?;
            println!("wrote {}", out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            let detail = msg.strip_prefix(&format!("{}: ", e.kind())).unwrap_or(&msg);
            eprintln!("error: {}: {detail}", e.kind());
            ExitCode::FAILURE
        }
    }
}
