//! Time-resolved visibility ν(τ) = e^{-2Γ(τ)} for the three baths, the data
//! behind the visibility-against-ω_cτ figure.
//!
//! cargo run --example time_resolved_visibility

use homsim::bath::BathSpec;
use homsim::interference::{linspace, sample_curve, CurveKind};
use homsim::jump_dynamics::SourceConfig;

fn main() -> homsim::Result<()> {
    let grid = linspace(0.0, 10.0, 11);
    let curves = [
        BathSpec::ohmic(0.5, 10.0)?,
        BathSpec::superohmic(0.5, 10.0)?,
        BathSpec::markovian(0.5, 10.0)?,
    ]
    .map(|b| {
        sample_curve(
            CurveKind::TimeResolved,
            &SourceConfig::identical(0.01, b)?,
            &grid,
        )
    });
    let [ohmic, superohmic, markovian] = curves;
    let (ohmic, superohmic, markovian) = (ohmic?, superohmic?, markovian?);

    println!(
        "{:>6} {:>10} {:>10} {:>10}",
        "tau", "ohmic", "superohmic", "markovian"
    );
    for (i, tau) in grid.iter().enumerate() {
        println!(
            "{tau:>6.1} {:>10.6} {:>10.6} {:>10.6}",
            ohmic.values[i], superohmic.values[i], markovian.values[i]
        );
    }
    Ok(())
}
