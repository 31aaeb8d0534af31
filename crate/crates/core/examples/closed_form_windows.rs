//! Small-window closed forms: the Markovian ν′_M(Δ) and the incomplete-Beta
//! window average of a power-law visibility (1 + τ²)^{-p}.
//!
//! cargo run --example closed_form_windows

use std::f64::consts::PI;

use homsim::bath::BathSpec;
use homsim::interference::{
    power_window_average, power_window_average_complex, windowed_visibility,
    windowed_visibility_markovian, windowed_visibility_ohmic_low_temperature,
};
use homsim::jump_dynamics::SourceConfig;

fn main() -> homsim::Result<()> {
    let m = BathSpec::markovian(0.5, 10.0)?;
    println!("Markovian, closed form vs exact window average");
    for g in [1e-4, 1e-2] {
        let src = SourceConfig::identical(g, m)?;
        for delta in [0.1, 1.0] {
            println!(
                "  g={g:<6} Δ={delta:<4} ν′_M={:.8} exact={:.8}",
                windowed_visibility_markovian(&m, delta)?,
                windowed_visibility(&src, delta)?
            );
        }
    }

    println!(
        "(1/Δ)∫(1+v²)^-1 dv at Δ=1: {} (π/4 = {})",
        power_window_average(1.0, 1.0)?,
        PI / 4.0
    );
    println!(
        "real and complex-argument Beta forms, p=0.6, Δ=0.1: {} {}",
        power_window_average(0.6, 0.1)?,
        power_window_average_complex(0.6, 0.1)?
    );

    let cold = BathSpec::ohmic(0.5, 1e6)?;
    let src = SourceConfig::identical(1e-6, cold)?;
    for delta in [0.5, 2.0, 8.0] {
        println!(
            "cold ohmic Δ={delta}: Beta form {:.8}, full window average {:.8}",
            windowed_visibility_ohmic_low_temperature(&cold, delta)?,
            windowed_visibility(&src, delta)?
        );
    }
    Ok(())
}
