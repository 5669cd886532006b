fn main() {
    std::process::exit(mcsa_cli::run(std::env::args_os()));
}
