fn main() {
    std::process::exit(fracweyl::cli::main_entry());
}
