//! Runs a scaled-down experiment preset, writes the regret CSV and
//! summarizes it again from disk.
//!
//! cargo run --release --example experiment_presets -- [preset] [out.csv]

use sfipp::report::{summarize_csv, summarize_output, write_csv_file};
use sfipp::{run_experiment, ExperimentConfig, Preset};

fn main() -> sfipp::Result<()> {
    let mut args = std::env::args().skip(1);
    let preset: Preset = args.next().as_deref().unwrap_or("collapse-gain").parse()?;
    let out = args
        .next()
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join(format!("{preset}.csv")));

    let config = ExperimentConfig {
        rounds: 2_000,
        instances: 20,
        ..ExperimentConfig::preset(preset)
    };
    let output = run_experiment(&config)?;
    write_csv_file(&output, &out)?;
    println!("wrote {}", out.display());

    let checkpoints = [500, 1_000, 2_000];
    let printed = summarize_output(&output, &checkpoints);
    print!("{printed}");
    assert_eq!(summarize_csv(&out, &checkpoints)?, printed);
    Ok(())
}
