use std::process::ExitCode;

use clap::Parser;
use gqplab_cli::{run, Cli};

fn main() -> ExitCode {
    let cfg = Cli::parse().into_config();
    let out = run(&cfg);
    if !out.diagnostics.is_empty() {
        eprintln!("gqplab: {}", out.diagnostics);
    }
    let report = out.rendered(cfg.format);
    match &cfg.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, report) {
                eprintln!("gqplab: {path}: {e}");
                return ExitCode::from(3);
            }
        }
        None => print!("{report}"),
    }
    ExitCode::from(out.exit_code as u8)
}
