mod commands;
mod config;

use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;

use config::{Cli, Command, Format, RunConfig};

const EXIT_USAGE: u8 = 1;
const EXIT_FAILED: u8 = 2;

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("QDISK_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .with_context(|| format!("QDISK_THREADS={v:?} is not a count"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    configure_threads()?;
    match &cli.command {
        Command::Lincoef(c) => commands::lincoef(&RunConfig::from_args(c, Format::Json)?),
        Command::Verify { suite, common } => commands::verify(*suite, &RunConfig::from_args(common, Format::Text)?),
        Command::Walk(c) => commands::walk(&RunConfig::from_args(c, Format::Json)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILED),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
