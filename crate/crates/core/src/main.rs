fn main() {
    std::process::exit(gaussian_capacity::cli::run(std::env::args_os()));
}
