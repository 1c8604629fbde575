fn main() {
    std::process::exit(cft_spanner::cli::run(std::env::args_os()));
}
