fn main() {
    std::process::exit(finbase::cli::main_entry());
}
