use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(stigflock::cli::main(std::env::args()) as u8)
}
