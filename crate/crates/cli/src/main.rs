use clap::Parser;
use nilgrowth_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let status = run(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(status as i32);
}
