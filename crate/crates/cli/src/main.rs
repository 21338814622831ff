use std::io;
use std::panic;
use std::process::ExitCode;

use strongcert_cli::{run, CliError, EXIT_ERROR};

fn main() -> ExitCode {
    // a panic is a bug, but the caller still gets the documented error shape
    panic::set_hook(Box::new(|info| {
        let error = CliError::Runtime {
            message: format!("internal error: {info}"),
        };
        eprintln!("{}", error.to_json());
    }));
    let code = panic::catch_unwind(|| {
        let mut out = io::stdout().lock();
        let mut err = io::stderr().lock();
        run(std::env::args_os(), &mut out, &mut err)
    })
    .unwrap_or(EXIT_ERROR);
    ExitCode::from(code as u8)
}
