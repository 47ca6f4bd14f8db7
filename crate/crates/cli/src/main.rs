fn main() {
    std::process::exit(snip_cli::main_with_args(std::env::args_os()));
}
