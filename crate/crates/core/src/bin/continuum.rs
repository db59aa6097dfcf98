fn main() {
    std::process::exit(continuum::cli::run(std::env::args_os()));
}
