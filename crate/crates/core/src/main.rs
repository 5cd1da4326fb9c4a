fn main() {
    std::process::exit(htype_spaces::cli::main());
}
