use clap::Parser;

fn main() -> anyhow::Result<()> {
    let argv: Vec<String> = std::env::args().collect();
    let cli = qload::Cli::parse_from(&argv);
    qload::execute(&cli, argv)
}
