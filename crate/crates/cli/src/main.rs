mod config;
mod run;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use crate::config::{Cli, Mode};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let trace = match &cli.mode {
        Mode::Report(a) => a.common.trace,
        Mode::Verify(a) => a.common.trace,
        Mode::Scan(a) => a.common.trace,
        Mode::AlphaTable(a) => a.trace,
    };
    let mut logger =
        env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"));
    if trace {
        logger.filter_module("lcstruct", log::LevelFilter::Trace);
    }
    logger.init();

    match run::run(&cli.mode) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(outcome.stdout.as_bytes());
            ExitCode::from(outcome.code as u8)
        }
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code() as u8)
        }
    }
}
