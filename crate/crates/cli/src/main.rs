fn main() {
    std::process::exit(salpeter_cli::run(std::env::args().collect()));
}
