fn main() {
    std::process::exit(sepstruct::run(std::env::args_os()));
}
