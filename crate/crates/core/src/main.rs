fn main() -> std::process::ExitCode {
    k3atlas::cli::main()
}
