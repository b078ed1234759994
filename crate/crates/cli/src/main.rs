use std::process::ExitCode;

use clap::Parser;
use ctmc_limit_cli::{run, Cli, CliError};
use serde_json::json;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let error = json!({ "error": { "kind": "usage", "message": e.to_string().trim_end(), "exit_code": 1 } });
            eprintln!("{error}");
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(report) => {
            println!("{}", report.render(cli.format));
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let CliError::CheckFailed { report, .. } = &e {
                println!("{}", report.render(cli.format));
            }
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
