fn main() -> std::process::ExitCode {
    nstrees::cli::run()
}
