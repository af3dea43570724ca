fn main() {
    std::process::exit(gridpaths::cli_io::cli::run(std::env::args_os()));
}
