use clap::Parser;

fn main() {
    let cli = pag_cli::Cli::parse();
    let code = pag_cli::execute(
        &cli,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
