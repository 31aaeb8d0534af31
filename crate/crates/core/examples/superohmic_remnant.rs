//! Superohmic dephasing saturates, leaving a visibility floor at long
//! separations.
//!
//! cargo run --example superohmic_remnant

use homsim::bath::BathSpec;
use homsim::interference::{superohmic_asymptote, superohmic_asymptote_scaling_limit, visibility};
use homsim::jump_dynamics::SourceConfig;

fn main() -> homsim::Result<()> {
    for theta in [2.0, 10.0, 100.0] {
        let b = BathSpec::superohmic(0.5, theta)?;
        let src = SourceConfig::identical(0.01, b)?;
        println!(
            "θ={theta:<5} ν(10)={:.6} ν(200)={:.6} floor={:.6} θ≫1 floor={:.6}",
            visibility(&src, 10.0)?,
            visibility(&src, 200.0)?,
            superohmic_asymptote(&b)?,
            superohmic_asymptote_scaling_limit(&b)?
        );
    }
    Ok(())
}
