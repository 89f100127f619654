fn main() {
    std::process::exit(randcert::cli::main());
}
