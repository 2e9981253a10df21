use std::process;

fn main() {
    process::exit(gmaos::cli::run(std::env::args_os()));
}
