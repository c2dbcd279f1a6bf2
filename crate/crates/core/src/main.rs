fn main() {
    std::process::exit(diamond::cli::run(std::env::args_os()));
}
