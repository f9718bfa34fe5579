fn main() {
    std::process::exit(modulizer::run(std::env::args_os()));
}
