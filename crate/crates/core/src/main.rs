fn main() -> std::process::ExitCode {
    wavesign::cli::main_with_args(std::env::args_os())
}
