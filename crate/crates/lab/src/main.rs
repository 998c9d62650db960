fn main() {
    std::process::exit(edcs_lab::cli::main_with_args(std::env::args_os()));
}
