fn main() {
    std::process::exit(netalign::cli::run(std::env::args_os()));
}
