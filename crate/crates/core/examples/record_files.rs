//! Records persist as JSON lines, so shards from separate runs can be
//! concatenated and analysed together.
//!
//! cargo run --example record_files

use std::io::BufReader;

use homsim::bath::BathSpec;
use homsim::jump_dynamics::SourceConfig;
use homsim::trajectories::{
    estimate_visibility, read_records, simulate_ensemble, write_records, Window,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let src = SourceConfig::identical(0.01, BathSpec::superohmic(0.5, 10.0)?)?;
    let path = std::env::temp_dir().join("homsim-records.jsonl");
    write_records(
        &simulate_ensemble(7, 5_000, &src)?,
        std::fs::File::create(&path)?,
    )?;

    let records = read_records(BufReader::new(std::fs::File::open(&path)?))?;
    println!("{} records in {}", records.len(), path.display());
    println!("first: {}", serde_json::to_string(&records[0])?);
    let est = estimate_visibility(&records, &Window::new(5.0)?)?;
    println!(
        "Δ=5: ν̂ = {:.4}, efficiency {:.4}",
        est.nu_hat, est.efficiency
    );
    Ok(())
}
