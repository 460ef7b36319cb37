fn main() {
    std::process::exit(curvalg::cli::run(std::env::args_os()));
}
