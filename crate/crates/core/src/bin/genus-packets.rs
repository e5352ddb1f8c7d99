fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(genus_packets::cli::run(&argv));
}
