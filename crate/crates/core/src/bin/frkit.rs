fn main() {
    std::process::exit(frkit::cli::run(std::env::args_os()));
}
