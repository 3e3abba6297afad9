fn main() {
    spinlat::cli::main()
}
