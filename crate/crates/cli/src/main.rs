fn main() {
    std::process::exit(polycheck_cli::run(std::env::args_os()));
}
