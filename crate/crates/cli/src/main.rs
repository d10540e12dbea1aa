#![forbid(unsafe_code)]

mod args;
mod run;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::{Cli, Command};

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    1
                }
            };
        }
    };

    if let Some(workers) = workers_of(&cli.command) {
        if workers > 0 {
            // Results never depend on the pool size; this only bounds CPU use.
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build_global();
        }
    }

    match run::dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            run::exit_code(&e)
        }
    }
}

fn workers_of(command: &Command) -> Option<usize> {
    match command {
        Command::Influence(a) => a.graph.workers,
        Command::Bounds(a) => a.graph.workers,
        Command::Maximize(a) => a.graph.workers,
        Command::Simulate(a) => a.graph.workers,
        Command::SweepLambda(a) => a.graph.workers,
    }
}
