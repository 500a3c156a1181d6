fn main() {
    std::process::exit(operanoid::cli::run(std::env::args_os()));
}
