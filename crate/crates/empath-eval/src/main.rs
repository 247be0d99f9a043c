fn main() {
    std::process::exit(empath_eval::cli::run(std::env::args_os()));
}
