fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(volterra_helix::cli::run_command(&argv));
}
