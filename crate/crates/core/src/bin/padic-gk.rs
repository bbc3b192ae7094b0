fn main() {
    std::process::exit(padic_gk::cli::run(std::env::args_os()));
}
