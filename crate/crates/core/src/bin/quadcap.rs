fn main() {
    quadcap::cli::main_entry();
}
