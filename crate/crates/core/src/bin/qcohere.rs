fn main() {
    std::process::exit(qcohere::cli::main_with_args(std::env::args_os()));
}
