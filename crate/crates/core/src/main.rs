fn main() {
    std::process::exit(layered_green::cli::run_from(std::env::args_os()));
}
