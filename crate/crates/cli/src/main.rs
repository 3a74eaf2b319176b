fn main() {
    std::process::exit(rectpart_cli::run(std::env::args_os()));
}
