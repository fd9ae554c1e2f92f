fn main() {
    std::process::exit(magiclab::cli::run(std::env::args_os()));
}
