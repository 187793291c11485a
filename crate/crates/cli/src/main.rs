fn main() {
    std::process::exit(granfore_cli::run(std::env::args_os()));
}
