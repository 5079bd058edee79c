use std::io::{self, IsTerminal};

fn main() {
    let stdin = io::stdin();
    let interactive = stdin.is_terminal();
    let mut io = puq::cli::Io {
        stdin: &mut stdin.lock(),
        stdout: &mut io::stdout().lock(),
        stderr: &mut io::stderr().lock(),
        interactive,
    };
    let code = puq::cli::run_cli(std::env::args_os(), &mut io);
    std::process::exit(code);
}
