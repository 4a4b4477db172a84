fn main() {
    std::process::exit(netadopt_cli::run(std::env::args_os()));
}
