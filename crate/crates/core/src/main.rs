fn main() {
    std::process::exit(heat_ansatz::cli::run(std::env::args_os()));
}
