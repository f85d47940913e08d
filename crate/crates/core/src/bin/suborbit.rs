use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let r = suborbit::cli::dispatch(std::env::args_os());
    if !r.diagnostics.is_empty() {
        eprintln!("{}", r.diagnostics);
    }
    let mut out = std::io::stdout().lock();
    if out
        .write_all(r.stdout.as_bytes())
        .and_then(|_| out.flush())
        .is_err()
    {
        return ExitCode::from(1);
    }
    ExitCode::from(r.exit_code as u8)
}
