fn main() {
    std::process::exit(corrsynth::cli::run_from(std::env::args_os()));
}
