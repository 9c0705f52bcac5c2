use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = match extlift::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let out = extlift::run(&cli);
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &out.text),
        None => std::io::stdout().write_all(out.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("extlift: cannot write output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(out.code as u8)
}
