fn main() {
    std::process::exit(imethod_lab::cli::main_from_args());
}
