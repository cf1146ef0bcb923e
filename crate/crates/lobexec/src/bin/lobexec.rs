fn main() {
    std::process::exit(lobexec::cli::run(std::env::args_os()));
}
