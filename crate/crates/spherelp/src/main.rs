use std::process::ExitCode;

fn main() -> ExitCode {
    spherelp::cli::main_with_args(std::env::args_os())
}
