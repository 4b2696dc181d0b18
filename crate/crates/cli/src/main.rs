fn main() {
    std::process::exit(tropkp_cli::run(std::env::args_os()));
}
