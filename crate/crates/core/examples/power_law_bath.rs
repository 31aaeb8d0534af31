//! Baths with J(ω) = A ωⁿ e^{-ω} for any n ≥ 1 go through quadrature; the
//! sampler tabulates Γ once and interpolates.
//!
//! cargo run --release --example power_law_bath

use homsim::bath::{self, BathSpec};
use homsim::jump_dynamics::SourceConfig;
use homsim::trajectories::{estimate_visibility, simulate_ensemble, GammaTable, Window};

fn main() -> homsim::Result<()> {
    for n in [1.0, 1.5, 2.0, 3.0, 4.0] {
        let b = BathSpec::power_law(n, 0.5, 10.0)?;
        println!(
            "n={n}: Γ(1)={:.6} Γ(50)={:.6}",
            bath::gamma(&b, 1.0)?,
            bath::gamma(&b, 50.0)?
        );
    }
    let b = BathSpec::power_law(2.0, 0.5, 10.0)?;
    let table = GammaTable::build(b, 20.0, 0.02)?;
    println!(
        "table Γ(3.3) = {:.9}, direct {:.9}",
        table.gamma(3.3)?,
        bath::gamma(&b, 3.3)?
    );

    let records = simulate_ensemble(5, 200_000, &SourceConfig::identical(0.01, b)?)?;
    let est = estimate_visibility(&records, &Window::new(2.0)?)?;
    println!("n=2, Δ=2: ν̂ = {:.4} ± {:.4}", est.nu_hat, est.std_error());
    Ok(())
}
