use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;
mod io;

fn main() -> ExitCode {
    let cli = match args::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (output, out_path) = match commands::run(cli.command) {
        Ok(done) => done,
        Err(e) => {
            eprintln!("{}", e.record());
            return ExitCode::from(e.exit_code());
        }
    };
    match io::write_output(out_path.as_deref(), &output) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.exit_code())
        }
    }
}
