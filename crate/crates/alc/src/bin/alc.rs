fn main() {
    let code = alc::cli::run(std::env::args().skip(1));
    std::process::exit(code);
}
