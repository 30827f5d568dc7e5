fn main() {
    std::process::exit(hulthen::cli::run(std::env::args_os()));
}
