fn main() {
    std::process::exit(msdforge::cli::run(std::env::args_os()));
}
