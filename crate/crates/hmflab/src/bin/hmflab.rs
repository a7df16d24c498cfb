fn main() {
    env_logger::init();
    std::process::exit(hmflab::cli::run(std::env::args_os()));
}
