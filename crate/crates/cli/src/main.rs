use std::process::ExitCode;

use clap::Parser;
use optrf_cli::args::Cli;
use optrf_cli::{run, Outcome};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    match run(&cli) {
        Ok(Outcome::Report(report)) => {
            for (name, path) in &report.outputs {
                println!("{name}: {}", path.display());
            }
            ExitCode::SUCCESS
        }
        Ok(Outcome::Rows(n)) => {
            println!("wrote {n} rows");
            ExitCode::SUCCESS
        }
        Ok(Outcome::CacheDir(dir)) => {
            println!("cached in {}", dir.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
