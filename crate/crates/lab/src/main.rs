fn main() {
    std::process::exit(borderline::cli::run(std::env::args_os()));
}
