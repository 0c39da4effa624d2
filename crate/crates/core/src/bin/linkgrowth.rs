fn main() {
    std::process::exit(linkgrowth::cli::main_with_args(std::env::args_os()));
}
