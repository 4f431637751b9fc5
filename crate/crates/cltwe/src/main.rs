fn main() {
    std::process::exit(cltwe::cli::run(std::env::args()));
}
