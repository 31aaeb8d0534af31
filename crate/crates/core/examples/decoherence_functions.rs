//! Decoherence function Γ(τ) for the three reference baths: exact closed form,
//! direct quadrature of the spectral integral, and the high-temperature
//! hyperbolic forms.
//!
//! cargo run --example decoherence_functions

use homsim::bath::{self, BathSpec};

fn main() -> homsim::Result<()> {
    let baths = [
        ("ohmic", BathSpec::ohmic(0.5, 10.0)?),
        ("superohmic", BathSpec::superohmic(0.5, 10.0)?),
    ];
    println!(
        "{:>10} {:>8} {:>14} {:>14} {:>10} {:>14}",
        "bath", "tau", "closed", "quadrature", "|diff|", "theta>>1 form"
    );
    for (name, b) in &baths {
        for tau in [0.01, 0.1, 1.0, 10.0, 100.0] {
            let closed = bath::gamma_closed(b, tau)?;
            let quad = bath::gamma_quadrature(b, tau)?;
            let scaling = bath::gamma_scaling_limit(b, tau)?;
            println!(
                "{name:>10} {tau:>8} {:>14.10} {:>14.10} {:>10.1e} {:>14.10}",
                closed.gamma,
                quad.gamma,
                (closed.gamma - quad.gamma).abs(),
                scaling
            );
        }
    }
    let m = BathSpec::markovian(0.5, 10.0)?;
    println!("markovian Γ(1) = Aπ/θ = {}", bath::gamma(&m, 1.0)?);
    Ok(())
}
