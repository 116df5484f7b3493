fn main() {
    std::process::exit(thoma::cli::main_with_args(std::env::args_os()));
}
