fn main() {
    std::process::exit(wl1::cli::run(std::env::args_os()));
}
