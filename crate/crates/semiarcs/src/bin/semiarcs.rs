fn main() {
    std::process::exit(semiarcs::cli::run(std::env::args_os()));
}
