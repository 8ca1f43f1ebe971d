fn main() {
    std::process::exit(oddvar::cli::run(std::env::args_os()));
}
