fn main() {
    std::process::exit(nilprob::cli::main_with_args(std::env::args_os()));
}
