fn main() -> std::process::ExitCode {
    moddata::cli::run_from_env()
}
