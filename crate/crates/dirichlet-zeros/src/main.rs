fn main() {
    std::process::exit(dirichlet_zeros::cli::main());
}
