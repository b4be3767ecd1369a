fn main() {
    std::process::exit(ban::cli::main());
}
