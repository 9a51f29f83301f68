use clap::Parser;
use clocknet::cli::{run, Cli};

fn main() {
    // clap exits with code 2 on invalid arguments
    let cli = Cli::parse();
    std::process::exit(run(cli));
}
