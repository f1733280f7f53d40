fn main() {
    let out = tvl::cli::main_with(std::env::args_os());
    if out.code == tvl::cli::EXIT_ERROR {
        eprint!("{}", out.text);
    } else {
        print!("{}", out.text);
    }
    std::process::exit(out.code);
}
