use clap::Parser;
use dcmwalk_cli::{run, Overrides};
use std::path::PathBuf;
use std::process::ExitCode;

/// Closed-loop walking scenarios on the reduced model: DCM planning,
/// online step adaptation, scripted pushes, CSV/JSON logs.
#[derive(Parser, Debug)]
#[command(name = "dcmwalk", version, about)]
struct Cli {
    /// Scenario file (JSON).
    #[arg(long)]
    config: PathBuf,

    /// Output directory for trajectory.csv, footprints.csv, summary.json.
    #[arg(long, default_value = "./out")]
    out: PathBuf,

    /// Override the control period (s).
    #[arg(long)]
    dt: Option<f64>,

    /// Disable the step adapter (ablation run).
    #[arg(long)]
    no_adapter: bool,

    /// Suppress the summary printout.
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let overrides = Overrides {
        dt: cli.dt,
        disable_adapter: cli.no_adapter,
    };
    match run(&cli.config, &cli.out, overrides) {
        Ok(outcome) => {
            if !cli.quiet {
                let s = &outcome.summary;
                println!(
                    "simulated {:.2} s | adapted steps: {} | mean width extension: {:.3} m | \
                     mean timing reduction: {:.3} s | max DCM error: {:.4} m | \
                     adapter cycle: {:.3} ms",
                    s.simulated_s,
                    s.adapted_step_count,
                    s.mean_step_width_extension_m,
                    s.mean_timing_reduction_s,
                    s.max_dcm_error_m,
                    s.mean_cycle_ms,
                );
                println!(
                    "wrote {}, {}, {}",
                    outcome.trajectory_path.display(),
                    outcome.footprints_path.display(),
                    outcome.summary_path.display()
                );
                if s.fall {
                    println!("FALL at t = {:.2} s", s.fall_time_s.unwrap_or(f64::NAN));
                }
            }
            if outcome.summary.fall {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
