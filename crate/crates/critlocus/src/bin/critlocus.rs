use clap::Parser;

fn main() {
    let cli = critlocus::cli::Cli::parse();
    std::process::exit(critlocus::cli::run(&cli));
}
