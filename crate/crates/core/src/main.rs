fn main() {
    std::process::exit(minktrig::cli::run(std::env::args_os()));
}
