use std::process::ExitCode;

use clap::Parser;
use coherence_forge::args::{Cli, Command};
use coherence_forge::error::EXIT_INPUT;
use coherence_forge::{CliError, JobSpec};

fn run(cli: Cli) -> Result<i32, CliError> {
    match &cli.command {
        Command::Job { path } => {
            let job = JobSpec::load(path)?;
            job.execute(path.parent())
        }
        cmd => cmd.to_job().expect("non-job command").execute(None),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT as u8 } else { 0 });
        }
    };
    let code = run(cli).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}
