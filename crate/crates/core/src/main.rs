fn main() {
    std::process::exit(spin_dephasing::cli::run(std::env::args_os()));
}
