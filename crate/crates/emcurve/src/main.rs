fn main() -> std::process::ExitCode {
    emcurve::cli::main()
}
