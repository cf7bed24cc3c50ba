fn main() {
    std::process::exit(diaghom::cli::run(std::env::args()));
}
