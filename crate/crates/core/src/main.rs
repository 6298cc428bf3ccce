fn main() {
    std::process::exit(geocut::cli::run(std::env::args_os()));
}
