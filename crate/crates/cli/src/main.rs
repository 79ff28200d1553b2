fn main() {
    std::process::exit(superspace_cli::run(std::env::args_os()));
}
