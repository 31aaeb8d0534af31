//! Explicit 4×4 density matrices for the two-emitter jump update.
//!
//! Basis order `|gg⟩, |ge⟩, |eg⟩, |ee⟩`, with the first letter for emitter 1.

#![allow(dead_code)]

use homsim::bath;
use homsim::jump_dynamics::{conditional_state, first_click_density, Detector, SourceConfig};
use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

pub type M = Matrix4<Complex64>;

pub const GG: usize = 0;
pub const GE: usize = 1;
pub const EG: usize = 2;
pub const EE: usize = 3;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn lowering(emitter: usize) -> M {
    let mut m = M::zeros();
    if emitter == 1 {
        m[(GE, EE)] = c(1.0);
        m[(GG, EG)] = c(1.0);
    } else {
        m[(EG, EE)] = c(1.0);
        m[(GG, GE)] = c(1.0);
    }
    m
}

/// `c± = √(g/2)(σ₁ ± σ₂)`.
pub fn jump(g: f64, d: Detector) -> M {
    (lowering(1) + lowering(2) * c(d.sign())) * c((g / 2.0).sqrt())
}

pub fn trace(m: &M) -> f64 {
    m.trace().re
}

/// Jump on `|ee⟩⟨ee|`, then no-click decay and the dephasing channel on the
/// single-excitation block with `(Γ₁ + Γ₂, φ)` supplied from outside.
/// Returns the probability of the first detector and the unnormalised state.
pub fn propagate(g: f64, first: Detector, tau: f64, gamma_sum: f64, phi: f64) -> (f64, M) {
    let mut rho0 = M::zeros();
    rho0[(EE, EE)] = c(1.0);
    let total: f64 = [Detector::Plus, Detector::Minus]
        .iter()
        .map(|&d| {
            let cd = jump(g, d);
            trace(&(cd * rho0 * cd.adjoint()))
        })
        .sum();
    let cd = jump(g, first);
    let jumped = cd * rho0 * cd.adjoint();
    let p_first = trace(&jumped) / total;
    let mut rho = jumped / c(trace(&jumped));

    // every excited amplitude decays as e^{-gτ/2} between clicks
    let decay = M::from_diagonal(&Vector4::new(
        c(1.0),
        c((-g * tau / 2.0).exp()),
        c((-g * tau / 2.0).exp()),
        c((-g * tau).exp()),
    ));
    rho = decay * rho * decay.adjoint();
    let factor = Complex64::from_polar((-gamma_sum).exp(), phi);
    rho[(GE, EG)] *= factor;
    rho[(EG, GE)] *= factor.conj();
    (p_first, rho)
}

/// Largest deviation between the matrix evolution and the solved
/// conditional state, over both first detectors and both second detectors.
pub fn max_deviation(src: &SourceConfig, t1: f64, tau: f64) -> f64 {
    let g1 = bath::gamma(src.bath1(), tau).unwrap();
    let g2 = bath::gamma(src.bath2(), tau).unwrap();
    let phi = bath::phi(src.bath1(), src.bath2(), t1, t1 + tau).unwrap();
    let mut worst: f64 = 0.0;
    for first in [Detector::Plus, Detector::Minus] {
        let (p_first, rho) = propagate(src.g(), first, tau, g1 + g2, phi);
        let state = conditional_state(src, t1, tau, first).unwrap();
        let mut dev = vec![
            (p_first - first_click_density(src, t1).unwrap().p_plus).abs(),
            (trace(&rho) - state.weight).abs(),
            (rho[(GE, GE)].re - state.population()).abs(),
            (rho[(EG, EG)].re - state.population()).abs(),
            (rho[(GE, EG)] - state.coherence()).norm(),
            (2.0 * rho[(GE, EG)].norm() / trace(&rho) - state.coherence_mag).abs(),
        ];
        if state.coherence_mag > 1e-8 {
            let unit = rho[(GE, EG)] * c(first.sign()) / rho[(GE, EG)].norm();
            dev.push((unit - Complex64::from_polar(1.0, state.phase)).norm());
        }
        for second in [Detector::Plus, Detector::Minus] {
            let cd = jump(src.g(), second);
            let density = trace(&(cd.adjoint() * cd * rho));
            dev.push((density - state.click_density(src.g(), second)).abs());
        }
        worst = dev.into_iter().fold(worst, f64::max);
    }
    worst
}
