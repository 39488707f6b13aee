fn main() {
    std::process::exit(strata::cli::run(std::env::args_os()));
}
