fn main() {
    std::process::exit(sigpart_cli::run_command(std::env::args_os()));
}
