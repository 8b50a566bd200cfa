use std::io::Write;
use std::time::Instant;

fn main() {
    let start = Instant::now();
    let args: Vec<String> = std::env::args().collect();
    let (code, output) = nc_plane::cli::run(args);
    print!("{output}");
    let _ = std::io::stdout().flush();
    eprintln!("time_ms: {}", start.elapsed().as_millis());
    std::process::exit(code);
}
