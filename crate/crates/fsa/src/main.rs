fn main() {
    std::process::exit(fsa::cli::run());
}
