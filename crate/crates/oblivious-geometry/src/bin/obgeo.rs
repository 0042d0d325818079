fn main() {
    std::process::exit(oblivious_geometry::cli::run(std::env::args_os()));
}
