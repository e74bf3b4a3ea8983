fn main() {
    std::process::exit(surfact::cli::main_with_args(std::env::args_os()));
}
