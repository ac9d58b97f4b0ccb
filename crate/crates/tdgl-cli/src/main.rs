fn main() {
    std::process::exit(tdgl_cli::run(std::env::args().collect()));
}
