use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(spermat::cli::run(std::env::args_os()))
}
