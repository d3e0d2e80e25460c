//! Command-line front end for the `optrf` library: argument parsing,
//! manifest/flag merging, run reports and the subcommands themselves.

pub mod args;
pub mod commands;
pub mod overrides;
pub mod report;

use args::{Cli, Command};
use report::StageError;

/// What a successful run produced, for the binary to print.
#[derive(Debug)]
pub enum Outcome {
    Report(Box<report::RunReport>),
    Rows(usize),
    CacheDir(std::path::PathBuf),
}

fn set_workers(n: Option<usize>) {
    if let Some(n) = n {
        // a second initialization (e.g. repeated in-process runs) keeps the first pool
        if rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            log::debug!("worker pool already initialized");
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, StageError> {
    let manifest_cmd = match &cli.command {
        Command::Features(a)
        | Command::Kernel(a)
        | Command::Train(a)
        | Command::Grid(a)
        | Command::Converge(a)
        | Command::Binarize(a) => Some(a),
        Command::Plotdata(_) | Command::Fetch(_) => None,
    };
    let Some(args) = manifest_cmd else {
        set_workers(cli.workers);
        return match &cli.command {
            Command::Plotdata(a) => commands::plotdata(a).map(Outcome::Rows),
            Command::Fetch(a) => commands::fetch(a).map(Outcome::CacheDir),
            _ => unreachable!("manifest commands handled above"),
        };
    };
    let resolved = commands::resolve_manifest(args, cli.workers)?;
    set_workers(resolved.manifest.workers);
    let report = match &cli.command {
        Command::Features(_) => commands::features(&resolved),
        Command::Kernel(_) => commands::kernel(&resolved),
        Command::Train(_) => commands::train(&resolved),
        Command::Grid(_) => commands::grid(&resolved),
        Command::Converge(_) => commands::converge(&resolved),
        Command::Binarize(_) => commands::binarize_cmd(&resolved),
        Command::Plotdata(_) | Command::Fetch(_) => unreachable!("handled above"),
    }?;
    Ok(Outcome::Report(Box::new(report)))
}
