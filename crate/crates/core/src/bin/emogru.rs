use std::io::{stderr, stdin, stdout};

fn main() {
    let code = emogru::cli::run_from(
        std::env::args_os(),
        &mut stdin().lock(),
        &mut stdout(),
        &mut stderr(),
    );
    std::process::exit(code);
}
