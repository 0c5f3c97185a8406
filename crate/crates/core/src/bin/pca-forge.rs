fn main() {
    std::process::exit(pca_forge::cli::main_exit_code());
}
