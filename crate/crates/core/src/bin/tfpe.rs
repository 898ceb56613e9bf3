fn main() -> std::process::ExitCode {
    tfpe::cli::main()
}
