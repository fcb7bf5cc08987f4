fn main() {
    std::process::exit(hbarcon_cli::main_with_args(std::env::args_os()));
}
