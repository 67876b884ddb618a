fn main() {
    std::process::exit(sl2helix::cli::main_with_args(std::env::args_os()));
}
