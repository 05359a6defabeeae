use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;
use structfac::cli::{run, Cli};
use structfac::CliError;

fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.output {
        Some(path) => {
            let mut out = BufWriter::new(File::create(path)?);
            let result = run(cli, &mut out);
            out.flush()?;
            result
        }
        None => {
            let mut out = io::stdout().lock();
            run(cli, &mut out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("structfac: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
