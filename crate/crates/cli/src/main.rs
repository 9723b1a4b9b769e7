use clap::Parser;
use rstprompt_cli::cli::Cli;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = rstprompt_cli::run(cli) {
        eprintln!("rstprompt: {e}");
        std::process::exit(e.exit_code());
    }
}
