fn main() {
    std::process::exit(conicdisc_cli::run_cli(std::env::args_os()));
}
