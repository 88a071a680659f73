fn main() {
    std::process::exit(qtur_cli::run(std::env::args_os()));
}
