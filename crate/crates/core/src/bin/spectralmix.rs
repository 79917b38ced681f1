fn main() -> std::process::ExitCode {
    spectralmix::cli::main()
}
