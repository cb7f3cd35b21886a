fn main() {
    std::process::exit(gatecalc::cli::run(std::env::args_os()));
}
