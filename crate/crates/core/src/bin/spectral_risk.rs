use clap::Parser;

fn main() {
    let cli = spectral_risk::cli::Cli::parse();
    std::process::exit(spectral_risk::cli::run(cli));
}
