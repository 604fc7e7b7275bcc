fn main() {
    std::process::exit(lintaut::cli::main());
}
