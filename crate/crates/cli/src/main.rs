use std::io::{self, Write};
use std::process::ExitCode;

use ackloop_cli::{execute, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let code = match execute(cli, &mut out) {
        Ok(exit) => exit,
        Err(f) => {
            let _ = out.flush();
            eprintln!("ackloop: {}", f.message);
            f.exit
        }
    };
    let _ = out.flush();
    ExitCode::from(code as u8)
}
