fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if let Err(e) = cimsim::run(args) {
        eprintln!("cimsim: {e}");
        std::process::exit(e.exit_code());
    }
}
