fn main() {
    std::process::exit(iota_nd::cli::run());
}
