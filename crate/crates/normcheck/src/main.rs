fn main() {
    std::process::exit(normcheck::cli::run(std::env::args().skip(1)));
}
