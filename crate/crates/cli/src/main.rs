use clap::Parser;
use heatrace_cli::{Cli, EXIT_CONFIG};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    std::process::exit(heatrace_cli::run(cli));
}
