use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use decoherence_lab::{load_config, run_scenario, CliResult, OrderName, Overrides, Scenario};

#[derive(Debug, Parser)]
#[command(name = "decoherence-lab", version, about = "Run an intrinsic-decoherence scenario")]
struct Args {
    scenario: Scenario,
    #[arg(long)]
    config: PathBuf,
    /// Comma-separated γ⁻¹ values, replacing the config's list.
    #[arg(long, value_delimiter = ',')]
    gamma_inv: Option<Vec<f64>>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    order: Option<OrderName>,
}

fn run(args: Args) -> CliResult<()> {
    let overrides = Overrides {
        gamma_inv_list: args.gamma_inv,
        output_dir: args.out,
        map_order: args.order,
    };
    let config = load_config(&args.config, args.scenario, &overrides)?;
    let report = run_scenario(&config)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    for (k, v) in &report.summary {
        println!("{k} = {v}");
    }
    println!("wrote {} files to {}", report.files.len(), report.output_dir.display());
    Ok(())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
