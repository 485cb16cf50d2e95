fn main() -> std::process::ExitCode {
    vsa_core::cli::main()
}
