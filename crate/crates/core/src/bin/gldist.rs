fn main() {
    std::process::exit(gl_distinction::cli::run(std::env::args_os()));
}
