mod config;
mod run;
mod svg;

use std::process::ExitCode;

use clap::CommandFactory;
use config::{Cli, ParseFailure};

fn main() -> ExitCode {
    let env_jobs = std::env::var("KUMMER_JOBS").ok();
    let config = match config::parse_config(std::env::args_os(), env_jobs.as_deref()) {
        Ok(c) => c,
        Err(ParseFailure::Clap(e)) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code().clamp(0, 255) as u8);
        }
        Err(ParseFailure::Usage(e)) => {
            eprintln!("error: {e}");
            eprintln!("{}", Cli::command().render_usage());
            return ExitCode::from(2);
        }
    };
    match run::run(&config) {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
