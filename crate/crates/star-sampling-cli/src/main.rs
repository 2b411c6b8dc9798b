use clap::Parser;

use star_sampling_cli::app::{run, Cli};

/// Exit codes: 0 success, 2 usage errors (via clap), 1 runtime errors.
fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
