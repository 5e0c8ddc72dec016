use clap::Parser;
use mathieu_kit::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let code = run(&cli, std::io::stdout().lock(), std::io::stderr().lock());
    std::process::exit(code);
}
