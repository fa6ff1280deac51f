fn main() {
    std::process::exit(lindblad_core::cli::run(std::env::args_os()));
}
