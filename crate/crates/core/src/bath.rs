//! Spectral densities, decoherence functions and bath-induced phases.
//!
//! Everything is expressed in units of the bath cutoff frequency: times are
//! `ω_c t`, rates are `γ / ω_c`, and `theta` is the dimensionless inverse
//! temperature `ω_c β`. The spectral density is `J(ω) = A ωⁿ e^{-ω}`.
//!
//! The decoherence function is
//!
//! ```text
//! Γ(τ) = ∫_0^∞ J(ω)/ω² (1 - cos ωτ) coth(θω/2) dω
//! ```
//!
//! and the bath phase entering non-identical sources is
//!
//! ```text
//! Λ(t₁, t₂) = ∫_0^∞ J(ω)/ω² (ωτ + 2 sin ωt₁ - 2 sin ωt₂ + sin ωτ) dω,  τ = t₂ - t₁.
//! ```
//!
//! Both are available by adaptive quadrature for any exponent `n ≥ 1`. For the
//! ohmic and superohmic families the integrals are also evaluated in closed
//! form. Expanding `coth(θω/2) = 1 + 2 Σ_k e^{-kθω}` turns the thermal part
//! into a sum over shifted cutoffs `1 + kθ`, which resums into log-gamma
//! (ohmic) and trigamma (superohmic) functions of complex argument.
//! [`gamma_scaling_limit`] keeps the simpler hyperbolic forms that hold when
//! `θ ≫ 1`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::quadrature::{panels, Integrator};
use crate::special::{ln_gamma, ln_gamma_re, trigamma};

/// Requested accuracy of the quadrature routes.
pub const QUADRATURE_TOLERANCE: f64 = 1e-9;

/// Below this click separation the hyperbolic superohmic form switches to
/// its Taylor series.
pub const SMALL_TAU: f64 = 1e-3;

const TAIL_TOLERANCE: f64 = 1e-14;
const MAX_PANELS: usize = 100_000;

/// Shape of the spectral density `J(ω) ∝ ωⁿ e^{-ω}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SpectralFamily {
    /// `n = 1`
    Ohmic,
    /// `n = 3`
    Superohmic,
    /// Rate law `Γ = Aπτ/θ`, the high-temperature limit of the ohmic bath.
    Markovian,
    /// General exponent `n > 0`, quadrature only.
    PowerLaw(f64),
}

impl SpectralFamily {
    /// Spectral exponent, `None` for the Markovian rate law.
    pub fn exponent(self) -> Option<f64> {
        match self {
            SpectralFamily::Ohmic => Some(1.0),
            SpectralFamily::Superohmic => Some(3.0),
            SpectralFamily::Markovian => None,
            SpectralFamily::PowerLaw(n) => Some(n),
        }
    }
}

/// One dephasing environment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    family: SpectralFamily,
    coupling: f64,
    theta: f64,
}

impl BathSpec {
    /// `coupling` is the dimensionless strength `A` (zero switches the bath
    /// off), `theta` is `ω_c β`.
    pub fn new(family: SpectralFamily, coupling: f64, theta: f64) -> Result<Self> {
        ensure(coupling.is_finite() && coupling >= 0.0, || {
            format!("coupling A must be finite and nonnegative, got {coupling}")
        })?;
        ensure(theta.is_finite() && theta > 0.0, || {
            format!("theta must be finite and positive, got {theta}")
        })?;
        if let SpectralFamily::PowerLaw(n) = family {
            ensure(n.is_finite() && n > 0.0, || {
                format!("spectral exponent must be positive, got {n}")
            })?;
        }
        Ok(Self {
            family,
            coupling,
            theta,
        })
    }

    pub fn ohmic(coupling: f64, theta: f64) -> Result<Self> {
        Self::new(SpectralFamily::Ohmic, coupling, theta)
    }

    pub fn superohmic(coupling: f64, theta: f64) -> Result<Self> {
        Self::new(SpectralFamily::Superohmic, coupling, theta)
    }

    pub fn markovian(coupling: f64, theta: f64) -> Result<Self> {
        Self::new(SpectralFamily::Markovian, coupling, theta)
    }

    pub fn power_law(exponent: f64, coupling: f64, theta: f64) -> Result<Self> {
        Self::new(SpectralFamily::PowerLaw(exponent), coupling, theta)
    }

    pub fn family(&self) -> SpectralFamily {
        self.family
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Same bath with a different coupling strength.
    pub fn with_coupling(&self, coupling: f64) -> Result<Self> {
        Self::new(self.family, coupling, self.theta)
    }

    /// Whether [`gamma_closed`] is defined for this bath.
    pub fn has_closed_form(&self) -> bool {
        !matches!(self.family, SpectralFamily::PowerLaw(_))
    }

    fn spectral_exponent(&self, op: &str) -> Result<f64> {
        self.family.exponent().ok_or_else(|| {
            Error::Unsupported(format!(
                "{op}: the Markovian bath is a rate law without J(ω)"
            ))
        })
    }
}

/// How a decoherence value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    ClosedForm,
    Quadrature,
}

/// A value of `Γ(τ)` with its provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoherenceValue {
    pub gamma: f64,
    pub method: Method,
    /// Zero for closed forms.
    pub est_abs_error: f64,
}

impl DecoherenceValue {
    fn closed(gamma: f64) -> Self {
        Self {
            gamma: gamma.max(0.0),
            method: Method::ClosedForm,
            est_abs_error: 0.0,
        }
    }
}

fn check_time(name: &str, t: f64) -> Result<()> {
    ensure(t.is_finite() && t >= 0.0, || {
        format!("{name} must be finite and nonnegative, got {t}")
    })
}

/// `J(ω) = A ωⁿ e^{-ω}`.
pub fn spectral_density(bath: &BathSpec, omega: f64) -> Result<f64> {
    let n = bath.spectral_exponent("spectral_density")?;
    ensure(omega.is_finite() && omega >= 0.0, || {
        format!("omega must be finite and nonnegative, got {omega}")
    })?;
    if omega == 0.0 {
        return Ok(0.0);
    }
    Ok(bath.coupling * omega.powf(n) * (-omega).exp())
}

/// Upper bound on `∫_W^∞ ω^m e^{-ω} dω`.
fn gamma_tail_bound(m: f64, w: f64) -> f64 {
    let head = w.powf(m) * (-w).exp();
    if m > 0.0 {
        head / (1.0 - m / w)
    } else {
        head
    }
}

/// Smallest cutoff `W` (on a half-unit grid) whose tail bound is below
/// `tolerance`, together with that bound.
fn truncation(bound: impl Fn(f64) -> f64, start: f64, tolerance: f64) -> (f64, f64) {
    let mut w = start;
    loop {
        let b = bound(w);
        if b < tolerance || w > 800.0 {
            return (w, b);
        }
        w += 0.5;
    }
}

/// Integrand of Γ. Uses `1 - cos x = 2 sin²(x/2)` and a second-order series
/// where both `ωτ` and `θω` are tiny.
fn gamma_integrand(n: f64, coupling: f64, theta: f64, tau: f64, omega: f64) -> f64 {
    let envelope = coupling * omega.powf(n - 2.0) * (-omega).exp();
    let scale = omega * tau.max(theta);
    if scale < 1e-4 {
        let wt = omega * tau;
        let wth = omega * theta;
        return coupling
            * omega.powf(n - 1.0)
            * (-omega).exp()
            * (tau * tau / theta)
            * (1.0 - wt * wt / 12.0 + wth * wth / 12.0);
    }
    let half = (0.5 * omega * tau).sin();
    envelope * 2.0 * half * half / (0.5 * theta * omega).tanh()
}

/// Γ(τ) by adaptive quadrature of its defining integral.
pub fn gamma_quadrature(bath: &BathSpec, tau: f64) -> Result<DecoherenceValue> {
    let n = bath.spectral_exponent("gamma_quadrature")?;
    check_time("tau", tau)?;
    if n < 1.0 {
        return Err(Error::Divergent { exponent: n });
    }
    if tau == 0.0 || bath.coupling == 0.0 {
        return Ok(DecoherenceValue {
            gamma: 0.0,
            method: Method::Quadrature,
            est_abs_error: 0.0,
        });
    }
    let (a, theta) = (bath.coupling, bath.theta);
    let m = n - 2.0;
    let (w_max, tail) = truncation(
        |w| 2.0 * a / (0.5 * theta * w).tanh() * gamma_tail_bound(m, w),
        (m + 2.0).max(5.0),
        TAIL_TOLERANCE,
    );
    let width = (PI / tau).min(1.0);
    let points = panels(0.0, w_max, width, MAX_PANELS);
    let result = Integrator::new(1e-12, 1e-11)
        .integrate(|w| gamma_integrand(n, a, theta, tau, w), &points)?;
    let est_abs_error = result.abs_error + tail;
    if est_abs_error > QUADRATURE_TOLERANCE {
        return Err(Error::NonConvergence {
            achieved: est_abs_error,
            requested: QUADRATURE_TOLERANCE,
        });
    }
    Ok(DecoherenceValue {
        gamma: result.value.max(0.0),
        method: Method::Quadrature,
        est_abs_error,
    })
}

/// `dΓ/dτ = ∫ J(ω)/ω sin(ωτ) coth(θω/2) dω` by adaptive quadrature.
pub fn gamma_rate_quadrature(bath: &BathSpec, tau: f64) -> Result<f64> {
    check_time("tau", tau)?;
    if bath.family == SpectralFamily::Markovian {
        return Ok(bath.coupling * PI / bath.theta);
    }
    let n = bath.spectral_exponent("gamma_rate_quadrature")?;
    if n < 1.0 {
        return Err(Error::Divergent { exponent: n });
    }
    if tau == 0.0 || bath.coupling == 0.0 {
        return Ok(0.0);
    }
    let (a, theta) = (bath.coupling, bath.theta);
    let m = n - 1.0;
    let (w_max, tail) = truncation(
        |w| a / (0.5 * theta * w).tanh() * gamma_tail_bound(m, w),
        (m + 2.0).max(5.0),
        TAIL_TOLERANCE,
    );
    let integrand =
        |w: f64| a * w.powf(m) * (-w).exp() * (w * tau).sin() / (0.5 * theta * w).tanh();
    let width = (PI / tau).min(1.0);
    let result = Integrator::new(1e-12, 1e-11)
        .integrate(integrand, &panels(0.0, w_max, width, MAX_PANELS))?;
    let err = result.abs_error + tail;
    if err > QUADRATURE_TOLERANCE {
        return Err(Error::NonConvergence {
            achieved: err,
            requested: QUADRATURE_TOLERANCE,
        });
    }
    Ok(result.value)
}

/// Γ(τ) in closed form for the ohmic, superohmic and Markovian families.
///
/// Ohmic:
/// `Γ = (A/2) ln(1 + τ²) + A [2 ln Γ(1 + 1/θ) - 2 Re ln Γ(1 + (1 + iτ)/θ)]`.
///
/// Superohmic:
/// `Γ = A τ²(3 + τ²)/(1 + τ²)² + (2A/θ²) [ψ'(1 + 1/θ) - Re ψ'(1 + (1 - iτ)/θ)]`.
///
/// Markovian: `Γ = Aπτ/θ`.
pub fn gamma_closed(bath: &BathSpec, tau: f64) -> Result<DecoherenceValue> {
    check_time("tau", tau)?;
    let (a, theta) = (bath.coupling, bath.theta);
    if let SpectralFamily::PowerLaw(_) = bath.family {
        return Err(Error::Unsupported(
            "gamma_closed: power-law baths are evaluated by quadrature".into(),
        ));
    }
    if tau == 0.0 {
        return Ok(DecoherenceValue::closed(0.0));
    }
    let gamma = match bath.family {
        SpectralFamily::Markovian => a * PI * tau / theta,
        SpectralFamily::Ohmic => {
            let x = 1.0 + 1.0 / theta;
            let vacuum = 0.5 * (tau * tau).ln_1p();
            let thermal = 2.0 * ln_gamma(x) - 2.0 * ln_gamma_re(Complex64::new(x, tau / theta));
            a * (vacuum + thermal)
        }
        SpectralFamily::Superohmic => {
            let x = 1.0 + 1.0 / theta;
            let t2 = tau * tau;
            let vacuum = t2 * (3.0 + t2) / ((1.0 + t2) * (1.0 + t2));
            let thermal = 2.0 / (theta * theta)
                * (trigamma(Complex64::new(x, 0.0)).re
                    - trigamma(Complex64::new(x, -tau / theta)).re);
            a * (vacuum + thermal)
        }
        SpectralFamily::PowerLaw(_) => unreachable!(),
    };
    Ok(DecoherenceValue::closed(gamma))
}

/// Γ(τ) in the hyperbolic forms valid for `θ ≫ 1`, where the thermal
/// occupation ignores the cutoff:
///
/// ```text
/// ohmic:      (A/2) ln(1 + τ²) + A ln(sinh(πτ/θ) / (πτ/θ))
/// superohmic: A τ²(3 + τ²)/(1 + τ²)² + A (π²/(3θ²) - 1/τ² + π² csch²(πτ/θ)/θ²)
/// ```
///
/// The superohmic thermal bracket is evaluated by Taylor series below
/// [`SMALL_TAU`], where its terms cancel catastrophically.
pub fn gamma_scaling_limit(bath: &BathSpec, tau: f64) -> Result<f64> {
    check_time("tau", tau)?;
    let (a, theta) = (bath.coupling, bath.theta);
    if tau == 0.0 {
        return Ok(0.0);
    }
    let x = PI * tau / theta;
    let value = match bath.family {
        SpectralFamily::Markovian => a * PI * tau / theta,
        SpectralFamily::Ohmic => {
            // ln(sinh x / x), series near zero
            let thermal = if x < 1e-4 {
                x * x / 6.0 - x.powi(4) / 180.0
            } else {
                x.sinh().ln() - x.ln()
            };
            a * (0.5 * (tau * tau).ln_1p() + thermal)
        }
        SpectralFamily::Superohmic => {
            let t2 = tau * tau;
            let vacuum = t2 * (3.0 + t2) / ((1.0 + t2) * (1.0 + t2));
            let k = PI * PI / (theta * theta);
            let thermal = if tau < SMALL_TAU {
                let x2 = x * x;
                k * x2 * (1.0 / 15.0 - 2.0 * x2 / 189.0 + x2 * x2 / 675.0)
            } else {
                k / 3.0 - 1.0 / t2 + k / (x.sinh() * x.sinh())
            };
            a * (vacuum + thermal)
        }
        SpectralFamily::PowerLaw(_) => {
            return Err(Error::Unsupported(
                "gamma_scaling_limit: no hyperbolic form for power-law baths".into(),
            ))
        }
    };
    Ok(value.max(0.0))
}

/// Γ(τ) by the closed form when one exists, quadrature otherwise.
pub fn gamma(bath: &BathSpec, tau: f64) -> Result<f64> {
    if bath.has_closed_form() {
        gamma_closed(bath, tau).map(|v| v.gamma)
    } else {
        gamma_quadrature(bath, tau).map(|v| v.gamma)
    }
}

fn check_interval(t1: f64, t2: f64) -> Result<()> {
    check_time("t1", t1)?;
    check_time("t2", t2)?;
    ensure(t2 >= t1, || format!("need t1 <= t2, got t1={t1}, t2={t2}"))
}

fn lambda_integrand(n: f64, coupling: f64, t1: f64, t2: f64, omega: f64) -> f64 {
    let tau = t2 - t1;
    let envelope = coupling * omega.powf(n - 2.0) * (-omega).exp();
    if omega * t2 < 1e-3 {
        // The O(ω) terms cancel identically.
        let c3 = 2.0 * t1.powi(3) - 2.0 * t2.powi(3) + tau.powi(3);
        let c5 = 2.0 * t1.powi(5) - 2.0 * t2.powi(5) + tau.powi(5);
        let w3 = omega.powi(3);
        return envelope * (-w3 / 6.0 * c3 + w3 * omega * omega / 120.0 * c5);
    }
    envelope
        * (omega * tau + 2.0 * (omega * t1).sin() - 2.0 * (omega * t2).sin() + (omega * tau).sin())
}

/// Bath phase `Λ(t₁, t₂)` by adaptive quadrature.
pub fn lambda_phase(bath: &BathSpec, t1: f64, t2: f64) -> Result<f64> {
    let n = bath.spectral_exponent("lambda_phase")?;
    check_interval(t1, t2)?;
    if t1 == t2 || bath.coupling == 0.0 {
        return Ok(0.0);
    }
    let a = bath.coupling;
    let tau = t2 - t1;
    let (w_max, tail) = truncation(
        |w| a * (tau * gamma_tail_bound(n - 1.0, w) + 5.0 * gamma_tail_bound(n - 2.0, w)),
        (n + 1.0).max(5.0),
        TAIL_TOLERANCE,
    );
    let width = (PI / t2).min(1.0);
    let points = panels(0.0, w_max, width, MAX_PANELS);
    let result =
        Integrator::new(1e-12, 1e-11).integrate(|w| lambda_integrand(n, a, t1, t2, w), &points)?;
    let err = result.abs_error + tail;
    if err > QUADRATURE_TOLERANCE {
        return Err(Error::NonConvergence {
            achieved: err,
            requested: QUADRATURE_TOLERANCE,
        });
    }
    Ok(result.value)
}

/// Bath phase `Λ(t₁, t₂)` in closed form (ohmic and superohmic).
///
/// ```text
/// ohmic:      A (τ + 2 atan t₁ - 2 atan t₂ + atan τ)
/// superohmic: A (2τ + 4t₁/(1+t₁²)² - 4t₂/(1+t₂²)² + 2τ/(1+τ²)²)
/// ```
pub fn lambda_closed(bath: &BathSpec, t1: f64, t2: f64) -> Result<f64> {
    check_interval(t1, t2)?;
    let a = bath.coupling;
    let tau = t2 - t1;
    match bath.family {
        SpectralFamily::Ohmic => Ok(a * (tau + 2.0 * t1.atan() - 2.0 * t2.atan() + tau.atan())),
        SpectralFamily::Superohmic => {
            let lorentz = |t: f64| t / ((1.0 + t * t) * (1.0 + t * t));
            Ok(a * (2.0 * tau + 4.0 * lorentz(t1) - 4.0 * lorentz(t2) + 2.0 * lorentz(tau)))
        }
        SpectralFamily::Markovian => Err(Error::Unsupported(
            "lambda_closed: the Markovian bath is a rate law without J(ω)".into(),
        )),
        SpectralFamily::PowerLaw(_) => Err(Error::Unsupported(
            "lambda_closed: power-law baths are evaluated by quadrature".into(),
        )),
    }
}

/// `Λ(t₁, t₂)` by the closed form when one exists, quadrature otherwise.
pub fn lambda(bath: &BathSpec, t1: f64, t2: f64) -> Result<f64> {
    match bath.family {
        SpectralFamily::Ohmic | SpectralFamily::Superohmic => lambda_closed(bath, t1, t2),
        _ => lambda_phase(bath, t1, t2),
    }
}

/// Relative phase `φ = Λ₂ - Λ₁` between the two sources, by quadrature.
/// Exactly zero when the baths coincide.
pub fn phi_phase(bath1: &BathSpec, bath2: &BathSpec, t1: f64, t2: f64) -> Result<f64> {
    check_interval(t1, t2)?;
    if bath1 == bath2 {
        return Ok(0.0);
    }
    Ok(lambda_phase(bath2, t1, t2)? - lambda_phase(bath1, t1, t2)?)
}

/// As [`phi_phase`], preferring the closed-form `Λ` where available.
pub fn phi(bath1: &BathSpec, bath2: &BathSpec, t1: f64, t2: f64) -> Result<f64> {
    check_interval(t1, t2)?;
    if bath1 == bath2 {
        return Ok(0.0);
    }
    Ok(lambda(bath2, t1, t2)? - lambda(bath1, t1, t2)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ohmic() -> BathSpec {
        BathSpec::ohmic(0.5, 10.0).unwrap()
    }

    fn superohmic() -> BathSpec {
        BathSpec::superohmic(0.5, 10.0).unwrap()
    }

    fn markovian() -> BathSpec {
        BathSpec::markovian(0.5, 10.0).unwrap()
    }

    #[test]
    fn construction_validates() {
        assert!(BathSpec::ohmic(-0.1, 10.0).is_err());
        assert!(BathSpec::ohmic(0.5, 0.0).is_err());
        assert!(BathSpec::ohmic(0.5, f64::NAN).is_err());
        assert!(BathSpec::power_law(0.0, 0.5, 10.0).is_err());
        assert!(BathSpec::ohmic(0.0, 10.0).is_ok());
    }

    #[test]
    fn spectral_density_values() {
        assert_eq!(spectral_density(&ohmic(), 0.0).unwrap(), 0.0);
        let j = spectral_density(&ohmic(), 1.0).unwrap();
        assert!((j - 0.5 * (-1.0f64).exp()).abs() < 1e-16);
        assert!((j - 0.18394).abs() < 1e-5);

        let s = superohmic();
        let peak = spectral_density(&s, 3.0).unwrap();
        for eps in [1e-3, 0.1, 1.0] {
            assert!(spectral_density(&s, 3.0 - eps).unwrap() < peak);
            assert!(spectral_density(&s, 3.0 + eps).unwrap() < peak);
        }
    }

    #[test]
    fn spectral_density_errors() {
        assert!(matches!(
            spectral_density(&markovian(), 1.0),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            spectral_density(&ohmic(), -1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn gamma_vanishes_at_zero() {
        for b in [ohmic(), superohmic(), markovian()] {
            assert_eq!(gamma_closed(&b, 0.0).unwrap().gamma, 0.0);
        }
        assert_eq!(gamma_quadrature(&ohmic(), 0.0).unwrap().gamma, 0.0);
        assert_eq!(gamma_quadrature(&superohmic(), 0.0).unwrap().gamma, 0.0);
    }

    #[test]
    fn gamma_markovian_rate() {
        let v = gamma_closed(&markovian(), 1.0).unwrap();
        assert!((v.gamma - PI / 20.0).abs() < 1e-15);
        assert_eq!(v.method, Method::ClosedForm);
        assert_eq!(v.est_abs_error, 0.0);
        let m2 = BathSpec::markovian(1.0, 10.0).unwrap();
        assert!((gamma_closed(&m2, 3.0).unwrap().gamma - 2.0 * 3.0 * PI / 20.0).abs() < 1e-15);
    }

    // Reference values from an independent 30-digit evaluation of the
    // defining integral.
    #[test]
    fn gamma_quadrature_reference_values() {
        let o = gamma_quadrature(&ohmic(), 1.0).unwrap();
        assert!(
            (o.gamma - 0.180_434_582_918_319_4).abs() < 1e-9,
            "{}",
            o.gamma
        );
        assert!(o.est_abs_error <= QUADRATURE_TOLERANCE);
        assert_eq!(o.method, Method::Quadrature);

        let s = gamma_quadrature(&superohmic(), 0.5).unwrap();
        assert!((s.gamma - 0.260_056_230_983_493_7).abs() < 1e-9);
        let s = gamma_quadrature(&superohmic(), 200.0).unwrap();
        assert!(
            (s.gamma - 0.514_330_494_697_775_9).abs() < 1e-9,
            "{}",
            s.gamma
        );
    }

    #[test]
    fn gamma_closed_reference_values() {
        let cases = [
            (ohmic(), 0.5, 0.057_576_338_040_494_18),
            (ohmic(), 1.0, 0.180_434_582_918_319_4),
            (ohmic(), 200.0, 31.298_813_625_884_874),
            (superohmic(), 0.5, 0.260_056_230_983_493_7),
            (superohmic(), 1.0, 0.500_222_788_532_369_3),
            (superohmic(), 200.0, 0.514_330_494_697_775_9),
        ];
        for (b, tau, expect) in cases {
            let v = gamma_closed(&b, tau).unwrap().gamma;
            assert!((v - expect).abs() < 1e-12, "{:?} τ={tau}: {v}", b.family());
        }
    }

    #[test]
    fn scaling_limit_differs_from_exact_at_moderate_theta() {
        // θ = 10 is not deep in the θ ≫ 1 regime: the hyperbolic forms
        // miss the cutoff in the thermal occupation.
        let exact = gamma_closed(&superohmic(), 200.0).unwrap().gamma;
        let approx = gamma_scaling_limit(&superohmic(), 200.0).unwrap();
        assert!((approx - 0.516_449_339_731_021_3).abs() < 1e-12);
        assert!((approx - exact) > 2e-3);
    }

    #[test]
    fn scaling_limit_converges_for_large_theta() {
        for family in [SpectralFamily::Ohmic, SpectralFamily::Superohmic] {
            let b = BathSpec::new(family, 0.5, 1e5).unwrap();
            for tau in [1e-4, 0.1, 1.0, 30.0] {
                let exact = gamma_closed(&b, tau).unwrap().gamma;
                let approx = gamma_scaling_limit(&b, tau).unwrap();
                assert!((exact - approx).abs() < 1e-8, "{family:?} τ={tau}");
            }
        }
    }

    #[test]
    fn scaling_limit_small_tau_reference() {
        // 40-digit evaluations of the hyperbolic superohmic form
        let b = superohmic();
        let series = gamma_scaling_limit(&b, 5e-4).unwrap();
        assert!((series - 3.750_810_179_922_651e-7).abs() < 1e-15);
        let direct = gamma_scaling_limit(&b, 2e-3).unwrap();
        assert!((direct - 6.001_258_788_023_065e-6).abs() < 1e-9);
    }

    #[test]
    fn power_law_routes() {
        let b = BathSpec::power_law(2.0, 0.5, 10.0).unwrap();
        assert!(matches!(gamma_closed(&b, 1.0), Err(Error::Unsupported(_))));
        let q = gamma_quadrature(&b, 1.0).unwrap();
        assert!(q.gamma > 0.0);
        assert_eq!(gamma(&b, 1.0).unwrap(), q.gamma);

        let sub = BathSpec::power_law(0.5, 0.5, 10.0).unwrap();
        assert!(matches!(
            gamma_quadrature(&sub, 1.0),
            Err(Error::Divergent { .. })
        ));
        // n = 3 through the general path agrees with the superohmic closed form
        let n3 = BathSpec::power_law(3.0, 0.5, 10.0).unwrap();
        let diff = gamma_quadrature(&n3, 2.0).unwrap().gamma
            - gamma_closed(&superohmic(), 2.0).unwrap().gamma;
        assert!(diff.abs() < 1e-9);
    }

    #[test]
    fn gamma_rate_matches_finite_difference() {
        for b in [
            ohmic(),
            superohmic(),
            BathSpec::power_law(2.0, 0.5, 10.0).unwrap(),
        ] {
            for tau in [0.3, 2.0, 15.0] {
                let h = 1e-3;
                let fd = (gamma_quadrature(&b, tau + h).unwrap().gamma
                    - gamma_quadrature(&b, tau - h).unwrap().gamma)
                    / (2.0 * h);
                let rate = gamma_rate_quadrature(&b, tau).unwrap();
                assert!(
                    (fd - rate).abs() < 1e-5,
                    "{:?} τ={tau}: {fd} vs {rate}",
                    b.family()
                );
            }
        }
        assert!((gamma_rate_quadrature(&markovian(), 4.0).unwrap() - PI / 20.0).abs() < 1e-16);
    }

    #[test]
    fn lambda_ohmic_from_origin() {
        let v = lambda_phase(&ohmic(), 0.0, 1.0).unwrap();
        let expect = 0.5 * (1.0 - PI / 4.0);
        assert!((v - expect).abs() < 1e-10, "{v}");
        assert!((expect - 0.10730).abs() < 1e-5);
    }

    #[test]
    fn lambda_closed_agrees_with_quadrature() {
        for b in [ohmic(), superohmic()] {
            for (t1, t2) in [(0.0, 1.0), (1.0, 3.0), (0.3, 0.31), (5.0, 40.0)] {
                let q = lambda_phase(&b, t1, t2).unwrap();
                let c = lambda_closed(&b, t1, t2).unwrap();
                assert!(
                    (q - c).abs() < 1e-9,
                    "{:?} ({t1},{t2}): {q} vs {c}",
                    b.family()
                );
            }
        }
    }

    #[test]
    fn lambda_is_reproducible_and_vanishes_on_diagonal() {
        let s = superohmic();
        let a = lambda_phase(&s, 1.0, 3.0).unwrap();
        let b = lambda_phase(&s, 1.0, 3.0).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
        assert_eq!(lambda_phase(&s, 2.0, 2.0).unwrap(), 0.0);
        assert!(matches!(lambda_phase(&s, 3.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(
            lambda_phase(&markovian(), 0.0, 1.0),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn phi_identical_and_swapped() {
        let b1 = BathSpec::ohmic(0.25, 10.0).unwrap();
        let b2 = ohmic();
        assert_eq!(phi_phase(&b2, &b2, 0.3, 7.0).unwrap(), 0.0);
        let forward = phi_phase(&b1, &b2, 0.0, 1.0).unwrap();
        assert!((forward - 0.25 * (1.0 - PI / 4.0)).abs() < 1e-10);
        let back = phi_phase(&b2, &b1, 0.0, 1.0).unwrap();
        assert_eq!(forward, -back);
        // identical Markovian baths short-circuit, distinct ones cannot be phased
        let m = markovian();
        assert_eq!(phi_phase(&m, &m, 0.0, 1.0).unwrap(), 0.0);
        assert!(phi_phase(&m, &m.with_coupling(0.1).unwrap(), 0.0, 1.0).is_err());
    }
}
