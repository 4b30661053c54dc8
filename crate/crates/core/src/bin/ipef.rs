fn main() {
    std::process::exit(ipef::cli::main_with_args(std::env::args_os()));
}
