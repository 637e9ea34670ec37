fn main() {
    std::process::exit(metagame_cli::dispatch(std::env::args_os()));
}
