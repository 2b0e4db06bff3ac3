fn main() {
    std::process::exit(wdfa::cli::main());
}
