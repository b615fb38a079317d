use clap::Parser;

use bayespred::cli::{execute, Args};

fn main() {
    let args = Args::parse();
    let code = execute(&args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
