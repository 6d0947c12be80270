use clap::Parser;
use onsager_cli::app::{configure_workers, run, Cli};
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_workers().and_then(|()| run(cli.command));
    match outcome {
        Ok(out) => {
            println!("{}", out.render(cli.format));
            ExitCode::from(out.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
