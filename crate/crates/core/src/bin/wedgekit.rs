fn main() {
    std::process::exit(wedgekit::cli::run(std::env::args_os()));
}
