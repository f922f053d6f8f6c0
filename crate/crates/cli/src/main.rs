fn main() {
    let out = &mut std::io::stdout().lock();
    let err = &mut std::io::stderr().lock();
    std::process::exit(ldcb_cli::run(std::env::args_os(), out, err));
}
