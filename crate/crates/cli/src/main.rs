use std::io;
use std::process::exit;

fn main() {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let code = sixsieve_cli::run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    exit(code);
}
