fn main() {
    std::process::exit(arcsin::cli::run());
}
