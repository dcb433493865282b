fn main() {
    std::process::exit(ca_core::cli::main_with_args(std::env::args_os()));
}
