fn main() {
    std::process::exit(homsim::cli::run(std::env::args_os()));
}
