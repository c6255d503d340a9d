use clap::Parser;

fn main() {
    // clap handles usage errors (exit 2) and --help/--version (exit 0);
    // anything that fails past parsing is a runtime error (exit 1).
    let cli = kaltrack_cli::args::Cli::parse();
    if let Err(err) = kaltrack_cli::run(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
