fn main() {
    std::process::exit(levy::run(std::env::args_os()));
}
