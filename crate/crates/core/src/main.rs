use std::io::Write;

fn main() {
    let out = prime_ratio::cli::run_args(std::env::args_os());
    if !out.stdout.is_empty() {
        // a closed pipe (e.g. `| head`) is not an error worth a panic
        let _ = writeln!(std::io::stdout().lock(), "{}", out.stdout);
    }
    if let Some(err) = out.stderr {
        let _ = writeln!(std::io::stderr().lock(), "{err}");
    }
    std::process::exit(out.exit_code);
}
