use clap::Parser;
use uniform_completion::cli::{main_with, Cli};

fn main() {
    std::process::exit(main_with(&Cli::parse()));
}
