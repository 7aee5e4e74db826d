fn main() {
    std::process::exit(periodviz::cli::run(std::env::args_os()));
}
