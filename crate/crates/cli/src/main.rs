use std::process::ExitCode;

fn main() -> ExitCode {
    nabla_fc::run(std::env::args_os())
}
