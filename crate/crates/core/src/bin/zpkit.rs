fn main() {
    std::process::exit(zpkit::cli::main_entry());
}
