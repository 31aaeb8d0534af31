//! Exact sampling of click records and a post-selected visibility estimate
//! with its 95% interval.
//!
//! cargo run --release --example monte_carlo_estimate

use homsim::bath::BathSpec;
use homsim::interference::windowed_visibility;
use homsim::jump_dynamics::SourceConfig;
use homsim::trajectories::{estimate_visibility, simulate_ensemble, Window};

fn main() -> homsim::Result<()> {
    let src = SourceConfig::identical(0.01, BathSpec::markovian(0.5, 10.0)?)?;
    let records = simulate_ensemble(2024, 1_000_000, &src)?;
    for delta in [0.1, 1.0, 10.0, f64::INFINITY] {
        let est = estimate_visibility(&records, &Window::new(delta)?)?;
        let exact = if delta.is_finite() {
            format!("{:.4}", windowed_visibility(&src, delta)?)
        } else {
            "-".into()
        };
        println!(
            "Δ={delta:<4} kept {:>7} ({:.4}) ν̂={:.4} [{:.4}, {:.4}] exact {exact}",
            est.retained(),
            est.efficiency,
            est.nu_hat,
            est.ci_low,
            est.ci_high
        );
    }
    Ok(())
}
