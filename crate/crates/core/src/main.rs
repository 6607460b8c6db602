use std::process::ExitCode;

fn main() -> ExitCode {
    mdlseg::cli::main_with_args(std::env::args_os())
}
