fn main() {
    std::process::exit(ensemble_majorize::cli::main_with_args(std::env::args_os()));
}
