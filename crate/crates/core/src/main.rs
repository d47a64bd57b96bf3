fn main() {
    std::process::exit(knotsym::cli::main_with_args(std::env::args_os()));
}
