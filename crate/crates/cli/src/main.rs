use clap::Parser;
use clustertree_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("clustertree: {e}");
        std::process::exit(e.exit_code());
    }
}
