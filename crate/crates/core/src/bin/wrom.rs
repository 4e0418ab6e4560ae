fn main() {
    std::process::exit(wrom::harness::cli_main(std::env::args_os()));
}
