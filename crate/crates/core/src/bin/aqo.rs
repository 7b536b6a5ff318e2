fn main() -> std::process::ExitCode {
    aqo_reduce::cli::run(std::env::args_os())
}
