use clap::Parser;

fn main() {
    let cli = commutator::cli::Cli::parse();
    std::process::exit(commutator::cli::run(cli));
}
