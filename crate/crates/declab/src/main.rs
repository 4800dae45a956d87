fn main() {
    eprintln!("declab: not wired up yet");
    std::process::exit(2);
}
