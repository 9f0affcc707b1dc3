fn main() {
    std::process::exit(onticlab::run());
}
