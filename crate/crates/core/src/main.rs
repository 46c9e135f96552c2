use std::process::ExitCode;

fn main() -> ExitCode {
    let out = mrx::cli::run_args(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
