//! The state between clicks: after a first click the emitters share one
//! excitation whose coherence decides where the second photon goes.
//!
//! cargo run --example conditional_state

use homsim::bath::BathSpec;
use homsim::jump_dynamics::{conditional_state, first_click_density, Detector, SourceConfig};

fn main() -> homsim::Result<()> {
    let g = 0.01;
    let src = SourceConfig::identical(g, BathSpec::ohmic(0.5, 10.0)?)?;
    let first = first_click_density(&src, 0.0)?;
    println!(
        "first click: density {} at t=0, P(D+) = {}",
        first.density, first.p_plus
    );
    for d1 in [Detector::Plus, Detector::Minus] {
        for tau in [0.0, 1.0, 5.0] {
            let s = conditional_state(&src, 0.0, tau, d1)?;
            println!(
                "first {} τ={tau}: weight {:.6} coherence {:+.6} p(+) {:.3e} p(-) {:.3e}",
                d1.symbol(),
                s.weight,
                s.coherence().re,
                s.click_density(g, Detector::Plus),
                s.click_density(g, Detector::Minus)
            );
        }
    }
    Ok(())
}
