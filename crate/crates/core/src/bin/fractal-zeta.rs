fn main() {
    std::process::exit(fractal_zeta::cli::main());
}
