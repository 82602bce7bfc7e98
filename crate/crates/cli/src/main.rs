use std::io::Read;
use std::process::ExitCode;

use clap::Parser;
use hsk::{run, Args};

fn main() -> ExitCode {
    let config = Args::parse().into_config();
    let text = if config.input == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map(|_| s)
    } else {
        std::fs::read_to_string(&config.input)
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", config.input);
            return ExitCode::from(2);
        }
    };
    let outcome = run(&config, &text);
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    ExitCode::from(outcome.status as u8)
}
