fn main() {
    std::process::exit(ppcc::cli::main());
}
