use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mdim::config::load_configs;
use mdim::error::{usage, EXIT_USAGE};
use mdim::runner::{run, RunOptions};

/// Runs covering, mean dimension, rate distortion and transport
/// experiments from a JSON config.
#[derive(Parser, Debug)]
#[command(name = "mdim", version)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    /// Experiment config (one experiment or an `experiments` list).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Replaces the base seed of every experiment.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long)]
    threads: Option<usize>,
    /// Largest point count handed to exact cover and packing search.
    #[arg(long)]
    exact_limit: Option<usize>,
    /// Report information quantities in bits instead of nats.
    #[arg(long)]
    bits: bool,
    /// Record elapsed seconds in the manifest (breaks byte equality of reruns).
    #[arg(long)]
    wall_clock: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print each operation next to the statement it computes.
    PaperMap,
}

fn exit(code: i32) -> ExitCode {
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return exit(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    if let Some(Command::PaperMap) = cli.command {
        print!("{}", mdim::statements::render());
        return exit(0);
    }
    if cli.threads == Some(0) {
        eprintln!("error: {}", usage("--threads", "must be positive"));
        return exit(EXIT_USAGE);
    }
    let result = cli
        .config
        .ok_or_else(|| usage("--config", "required"))
        .and_then(|path| load_configs(&path))
        .and_then(|configs| {
            run(
                configs,
                &RunOptions {
                    out: cli.out,
                    threads: cli.threads,
                    bits: cli.bits,
                    wall_clock: cli.wall_clock,
                    seed: cli.seed,
                    exact_limit: cli.exact_limit,
                },
            )
        });
    match result {
        Ok(m) => {
            for e in &m.experiments {
                for t in e.tasks.iter().filter(|t| t.message.is_some()) {
                    eprintln!("{}/{}: {:?}: {}", e.stem, t.name, t.status, t.message.as_deref().unwrap_or(""));
                }
            }
            exit(m.exit_code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit(e.exit_code())
        }
    }
}
