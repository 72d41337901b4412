fn main() {
    std::process::exit(sheafcalc_cli::run::run());
}
