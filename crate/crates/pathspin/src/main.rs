use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(pathspin::cli::main_entry(std::env::args_os()) as u8)
}
