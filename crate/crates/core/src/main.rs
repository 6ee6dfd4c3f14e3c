fn main() {
    std::process::exit(bootperc::cli::run());
}
