use clap::Parser;
use std::path::PathBuf;
use std::process::ExitCode;

/// Coherent-state laboratory for the free particle.
///
/// Exit status: 0 when every check passes, 1 when a tolerance fails,
/// 2 for invalid configuration or numerical errors, 3 for I/O errors.
#[derive(Parser, Debug)]
#[command(name = "airy-lab", version)]
struct Cli {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Directory receiving the report and artifacts.
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Reserved; no computation is stochastic. Recorded in the report.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = airy_lab::io::run_config(&cli.config, &cli.out_dir, cli.seed);
    if outcome.exit_code == 0 {
        println!("{}", outcome.message);
    } else {
        eprintln!("{}", outcome.message);
    }
    ExitCode::from(outcome.exit_code as u8)
}
