fn main() {
    std::process::exit(oscidecay::cli::run(std::env::args_os()));
}
