fn main() {
    std::process::exit(keccak_forge::cli::main_entry());
}
