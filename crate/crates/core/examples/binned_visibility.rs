//! Reconstruct ν(τ) from simulated clicks by binning on the separation.
//!
//! cargo run --release --example binned_visibility

use homsim::bath::BathSpec;
use homsim::interference::{linspace, visibility};
use homsim::jump_dynamics::SourceConfig;
use homsim::trajectories::{binned_visibility, simulate_ensemble};

fn main() -> homsim::Result<()> {
    let src = SourceConfig::identical(0.01, BathSpec::ohmic(0.5, 10.0)?)?;
    let records = simulate_ensemble(1, 1_000_000, &src)?;
    let binned = binned_visibility(&records, &linspace(0.0, 10.0, 11))?;
    println!(
        "{:>6} {:>6} {:>8} {:>18} {:>8}",
        "tau", "n", "nu_hat", "95% interval", "exact"
    );
    for bin in &binned.bins {
        if let Some(e) = bin.estimate {
            println!(
                "{:>6.2} {:>6} {:>8.4} [{:.4}, {:.4}] {:>8.4}",
                bin.mid(),
                bin.n,
                e.nu_hat,
                e.ci_low,
                e.ci_high,
                visibility(&src, bin.mid())?
            );
        }
    }
    Ok(())
}
