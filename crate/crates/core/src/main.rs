fn main() {
    std::process::exit(fibercone::run_cli());
}
