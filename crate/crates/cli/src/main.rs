use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use robrep_cli::{run_command, CliError, RunConfig};

fn fail(e: CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let config = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            e.exit()
        }
        // clap would exit 2, which is reserved for aborted solves
        Err(e) => {
            return fail(CliError::Usage(
                e.render().to_string().trim_end().to_owned(),
            ))
        }
    };
    match run_command(&config) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}
