fn main() {
    std::process::exit(brauer::cli::main());
}
