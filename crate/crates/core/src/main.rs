fn main() {
    std::process::exit(dirac1d::cli::main_with_args(std::env::args_os()));
}
