//! Emitters in different environments pick up a relative phase, so early
//! first clicks are worth keeping as well as short separations.
//!
//! cargo run --release --example distinct_sources

use homsim::bath::{self, BathSpec};
use homsim::interference::{visibility_nonidentical, windowed_visibility_nonidentical};
use homsim::jump_dynamics::SourceConfig;

fn main() -> homsim::Result<()> {
    let b1 = BathSpec::ohmic(0.25, 10.0)?;
    let b2 = BathSpec::ohmic(0.5, 10.0)?;
    let src = SourceConfig::pair(0.05, b1, b2)?;
    println!("φ(0, 1) = {:.6}", bath::phi_phase(&b1, &b2, 0.0, 1.0)?);
    for t1 in [0.0, 2.0, 10.0] {
        println!(
            "t₁={t1:<4} ν(τ=1) = {:.6}",
            visibility_nonidentical(&src, t1, 1.0)?
        );
    }
    for t1_max in [None, Some(20.0), Some(2.0)] {
        println!(
            "Δ=1, t₁ ≤ {:<4} ν′ = {:.6}",
            t1_max.map_or("∞".into(), |t: f64| t.to_string()),
            windowed_visibility_nonidentical(&src, 1.0, t1_max)?
        );
    }
    Ok(())
}
