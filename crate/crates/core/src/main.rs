use std::process::ExitCode;

use clap::Parser;
use holocurve::cli::{run, Cli, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = RunConfig::from_command(cli.command).and_then(|cfg| run(&cfg));
    match outcome {
        Ok(o) => {
            println!("{}", o.summary);
            for path in &o.artifacts {
                println!("wrote {}", path.display());
            }
            if o.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
