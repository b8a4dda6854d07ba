use std::io::Write;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (out, code) = curvemv_cli::run(&args, std::io::stdin().lock());
    let mut stdout = std::io::stdout().lock();
    // A closed pipe downstream is not worth a panic.
    let _ = stdout.write_all(out.as_bytes());
    let _ = stdout.flush();
    std::process::exit(code);
}
