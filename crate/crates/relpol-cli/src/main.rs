fn main() {
    std::process::exit(relpol_cli::cli_main(std::env::args_os()));
}
