//! Post-selecting closely spaced clicks: windowed visibility ν′(Δ) against
//! the fraction of second clicks that survive the window.
//!
//! cargo run --example post_selection_window

use homsim::bath::BathSpec;
use homsim::interference::{logspace, retained_fraction, windowed_visibility};
use homsim::jump_dynamics::SourceConfig;

fn main() -> homsim::Result<()> {
    let g = 0.01;
    let sources = [
        (
            "ohmic",
            SourceConfig::identical(g, BathSpec::ohmic(0.5, 10.0)?)?,
        ),
        (
            "superohmic",
            SourceConfig::identical(g, BathSpec::superohmic(0.5, 10.0)?)?,
        ),
        (
            "markovian",
            SourceConfig::identical(g, BathSpec::markovian(0.5, 10.0)?)?,
        ),
    ];
    println!(
        "{:>8} {:>10} {:>10} {:>10} {:>10}",
        "delta", "kept", "ohmic", "superohmic", "markovian"
    );
    for delta in logspace(1e-3, 100.0, 11) {
        print!("{delta:>8.3} {:>10.2e}", retained_fraction(g, delta));
        for (_, src) in &sources {
            print!(" {:>10.6}", windowed_visibility(src, delta)?);
        }
        println!();
    }
    Ok(())
}
