fn main() {
    std::process::exit(goldeneq::cli::main());
}
