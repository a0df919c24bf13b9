fn main() {
    std::process::exit(rapidbranch::cli::run());
}
