fn main() {
    std::process::exit(canonset::cli::main());
}
