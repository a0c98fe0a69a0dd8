fn main() {
    std::process::exit(edp_cli::main_with_args(std::env::args_os()));
}
