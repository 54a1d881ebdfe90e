fn main() {
    cyclespec::cli::run();
}
