fn main() {
    std::process::exit(chiralis::cli::run_cli(std::env::args_os()));
}
