//! Solved two-source quantum-jump dynamics.
//!
//! Both emitters start in `|ee⟩`. Photons meet on a 50:50 beam splitter, so
//! the detectors see the jump operators `c± = √(γ/2)(σ₁ ± σ₂)`. Pure
//! dephasing leaves populations alone, which makes the no-click evolution a
//! plain exponential decay and confines the post-click state to the
//! `{|ge⟩, |eg⟩}` block. That block is stored as three scalars: the trace
//! weight `e^{-γτ}`, the coherence magnitude `e^{-(Γ₁ + Γ₂)}` and the phase
//! `φ(t₁, t₂)`.
//!
//! A first click in `D₋` flips the sign of the coherence relative to `D₊`.
//! The same-detector probability is unchanged by that flip.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bath::{self, BathSpec};
use crate::error::{ensure, Result};

/// Output port of the beam splitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Detector {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Detector {
    pub fn flip(self) -> Self {
        match self {
            Detector::Plus => Detector::Minus,
            Detector::Minus => Detector::Plus,
        }
    }

    /// `+1` for `D₊`, `-1` for `D₋`.
    pub fn sign(self) -> f64 {
        match self {
            Detector::Plus => 1.0,
            Detector::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Detector::Plus => '+',
            Detector::Minus => '-',
        }
    }
}

/// Two emitters with a common decay rate `g = γ/ω_c`, each with its own bath.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceConfig {
    g: f64,
    bath1: BathSpec,
    bath2: BathSpec,
    identical: bool,
}

impl SourceConfig {
    /// Two sources sharing the same kind of environment.
    pub fn identical(g: f64, bath: BathSpec) -> Result<Self> {
        Self::pair(g, bath, bath)
    }

    /// Sources with possibly different baths. They count as identical exactly
    /// when the baths are equal.
    pub fn pair(g: f64, bath1: BathSpec, bath2: BathSpec) -> Result<Self> {
        ensure(g.is_finite() && g > 0.0, || {
            format!("decay rate g must be finite and positive, got {g}")
        })?;
        Ok(Self {
            g,
            bath1,
            bath2,
            identical: bath1 == bath2,
        })
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn bath1(&self) -> &BathSpec {
        &self.bath1
    }

    pub fn bath2(&self) -> &BathSpec {
        &self.bath2
    }

    pub fn is_identical(&self) -> bool {
        self.identical
    }

    /// Same baths, different decay rate.
    pub fn with_g(&self, g: f64) -> Result<Self> {
        Self::pair(g, self.bath1, self.bath2)
    }
}

fn check_time(name: &str, t: f64) -> Result<()> {
    ensure(t.is_finite() && t >= 0.0, || {
        format!("{name} must be finite and nonnegative, got {t}")
    })
}

/// Probability that neither detector has clicked by time `t`.
pub fn survival_probability(src: &SourceConfig, t: f64) -> Result<f64> {
    check_time("t", t)?;
    Ok((-2.0 * src.g * t).exp())
}

/// Density of the first click and the chance it lands in `D₊`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstClick {
    pub density: f64,
    pub p_plus: f64,
}

/// From `|ee⟩`, `Tr(c±†c± |ee⟩⟨ee|) = γ` for each detector.
pub fn first_click_density(src: &SourceConfig, t: f64) -> Result<FirstClick> {
    check_time("t", t)?;
    Ok(FirstClick {
        density: 2.0 * src.g * (-2.0 * src.g * t).exp(),
        p_plus: 0.5,
    })
}

/// Unnormalised single-excitation state a time `tau` after the first click.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalState {
    pub tau: f64,
    /// `e^{-gτ}`: probability of no second click yet.
    pub weight: f64,
    /// `e^{-(Γ₁(τ) + Γ₂(τ))}`
    pub coherence_mag: f64,
    /// `φ(t₁, t₁ + τ)`
    pub phase: f64,
    /// Detector of the first click.
    pub first: Detector,
}

impl ConditionalState {
    /// Diagonal entries `⟨ge|ρ|ge⟩ = ⟨eg|ρ|eg⟩`.
    pub fn population(&self) -> f64 {
        0.5 * self.weight
    }

    /// Off-diagonal entry `⟨ge|ρ|eg⟩`.
    pub fn coherence(&self) -> Complex64 {
        Complex64::from_polar(0.5 * self.weight * self.coherence_mag, self.phase)
            * self.first.sign()
    }

    /// Interference term `κ` such that the chance of repeating the first
    /// detector is `(1 + κ)/2`.
    pub fn interference(&self) -> f64 {
        self.coherence_mag * self.phase.cos()
    }

    /// `Tr(c_d† c_d ρ̃)` for a second click in `second`.
    pub fn click_density(&self, g: f64, second: Detector) -> f64 {
        let cross = 2.0 * self.coherence().re * second.sign();
        (0.5 * g * (2.0 * self.population() + cross)).max(0.0)
    }
}

/// Conditional state at `t₁ + τ` given a first click at `t₁` in `first`.
pub fn conditional_state(
    src: &SourceConfig,
    t1: f64,
    tau: f64,
    first: Detector,
) -> Result<ConditionalState> {
    check_time("t1", t1)?;
    check_time("tau", tau)?;
    let (decay, phase) = dephasing(src, t1, tau)?;
    Ok(ConditionalState {
        tau,
        weight: (-src.g * tau).exp(),
        coherence_mag: decay,
        phase,
        first,
    })
}

/// `(e^{-(Γ₁+Γ₂)}, φ)` at separation `tau` after a click at `t1`.
pub(crate) fn dephasing(src: &SourceConfig, t1: f64, tau: f64) -> Result<(f64, f64)> {
    if src.identical {
        let g = bath::gamma(&src.bath1, tau)?;
        return Ok(((-2.0 * g).exp(), 0.0));
    }
    let total = bath::gamma(&src.bath1, tau)? + bath::gamma(&src.bath2, tau)?;
    let phase = bath::phi(&src.bath1, &src.bath2, t1, t1 + tau)?;
    Ok(((-total).exp(), phase))
}

/// `κ(t₁, τ) = e^{-(Γ₁+Γ₂)} cos φ`, reducing to `e^{-2Γ}` for identical sources.
pub fn interference_factor(src: &SourceConfig, t1: f64, tau: f64) -> Result<f64> {
    check_time("t1", t1)?;
    check_time("tau", tau)?;
    let (decay, phase) = dephasing(src, t1, tau)?;
    Ok(if phase == 0.0 {
        decay
    } else {
        decay * phase.cos()
    })
}

/// Density of the second click at separation `tau`, in the same or the other
/// detector as the first.
///
/// `(g/2) e^{-gτ} [1 ± κ]`; the two branches sum to `g e^{-gτ}`.
pub fn second_click_density(
    src: &SourceConfig,
    t1: f64,
    tau: f64,
    same_detector: bool,
) -> Result<f64> {
    let kappa = interference_factor(src, t1, tau)?;
    let sign = if same_detector { 1.0 } else { -1.0 };
    Ok(0.5 * src.g * (-src.g * tau).exp() * (1.0 + sign * kappa))
}
