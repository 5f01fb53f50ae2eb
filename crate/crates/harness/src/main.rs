fn main() {
    std::process::exit(finsler_harness::cli::run_cli(std::env::args_os()));
}
