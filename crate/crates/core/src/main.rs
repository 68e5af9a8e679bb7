use std::io::Write;

fn main() {
    let (code, out) = ns_state::cli::run(std::env::args_os());
    let mut stdout = std::io::stdout().lock();
    if code == 2 || out.starts_with("error:") {
        eprint!("{out}");
    } else {
        let _ = stdout.write_all(out.as_bytes());
    }
    let _ = stdout.flush();
    std::process::exit(code);
}
