use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, out) = scl_cli::run(std::env::args_os().skip(1));
    if code == scl_cli::EXIT_USAGE {
        eprint!("{out}");
    } else {
        print!("{out}");
        let _ = std::io::stdout().flush();
    }
    ExitCode::from(code as u8)
}
