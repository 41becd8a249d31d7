fn main() {
    std::process::exit(fthresh::cli::run_main(std::env::args_os()));
}
