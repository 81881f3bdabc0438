fn main() {
    std::process::exit(curveflow::cli::run_cli(std::env::args_os()));
}
