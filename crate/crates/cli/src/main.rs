fn main() {
    std::process::exit(expset_cli::run(std::env::args_os()));
}
