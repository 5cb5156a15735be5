use clap::Parser;

fn main() {
    let cli = reforcite::cli::Cli::parse();
    if let Err(e) = reforcite::cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
