fn main() {
    std::process::exit(lpbm::cli::run(std::env::args_os()));
}
