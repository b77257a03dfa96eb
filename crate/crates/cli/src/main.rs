fn main() {
    std::process::exit(quadkit_cli::app::main_with(std::env::args_os()));
}
