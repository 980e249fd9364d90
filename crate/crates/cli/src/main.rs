fn main() {
    std::process::exit(persistq_cli::run(std::env::args_os()));
}
