fn main() {
    std::process::exit(monopot::cli::main());
}
