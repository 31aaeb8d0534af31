//! Hong-Ou-Mandel visibility: time-resolved, post-selected over a window of
//! click separations, and the small-window closed forms.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bath::{self, BathSpec, SpectralFamily};
use crate::error::{ensure, Error, Result};
use crate::jump_dynamics::{interference_factor, SourceConfig};
use crate::quadrature::{panels, Integrator};
use crate::special::{incomplete_beta, trigamma};

/// Absolute tolerance for window integrals.
pub const WINDOW_TOLERANCE: f64 = 1e-8;

fn window_integrator() -> Integrator {
    Integrator::new(WINDOW_TOLERANCE * 1e-3, 0.0)
}

fn check_delta(delta: f64) -> Result<()> {
    ensure(delta.is_finite() && delta > 0.0, || {
        format!("window width must be finite and positive, got {delta}")
    })
}

fn require_identical(src: &SourceConfig) -> Result<()> {
    if src.is_identical() {
        Ok(())
    } else {
        Err(Error::NotIdentical)
    }
}

/// `ν(τ) = e^{-2Γ(τ)}` for identical sources. Independent of the decay rate.
pub fn visibility(src: &SourceConfig, tau: f64) -> Result<f64> {
    require_identical(src)?;
    ensure(tau.is_finite() && tau >= 0.0, || {
        format!("tau must be finite and nonnegative, got {tau}")
    })?;
    Ok((-2.0 * bath::gamma(src.bath1(), tau)?).exp())
}

/// `ν = e^{-(Γ₁+Γ₂)} |cos φ(t₁, t₁+τ)|`.
pub fn visibility_nonidentical(src: &SourceConfig, t1: f64, tau: f64) -> Result<f64> {
    Ok(interference_factor(src, t1, tau)?.abs())
}

/// Fraction of second clicks that fall inside a window of width `delta`.
pub fn retained_fraction(g: f64, delta: f64) -> f64 {
    -(-g * delta).exp_m1()
}

/// Post-selected visibility `ν′(Δ)` as the window average of `ν(τ)` weighted
/// by the second-click density `g e^{-gτ}`.
pub fn windowed_visibility(src: &SourceConfig, delta: f64) -> Result<f64> {
    require_identical(src)?;
    check_delta(delta)?;
    let g = src.g();
    let norm = retained_fraction(g, delta);
    let bath = *src.bath1();
    let err = std::cell::Cell::new(None);
    let integrand = |tau: f64| match bath::gamma(&bath, tau) {
        Ok(gam) => g * (-g * tau).exp() / norm * (-2.0 * gam).exp(),
        Err(e) => {
            err.set(Some(e));
            0.0
        }
    };
    let value = window_integrator()
        .integrate(integrand, &panels(0.0, delta, 1.0, 10_000))?
        .value;
    if let Some(e) = err.take() {
        return Err(e);
    }
    Ok(value.clamp(0.0, 1.0))
}

/// `ν′(Δ) = |p₊₊ - p₊₋| / (p₊₊ + p₊₋)` with each conditional probability
/// integrated separately over the window.
pub fn windowed_visibility_from_densities(src: &SourceConfig, delta: f64) -> Result<f64> {
    require_identical(src)?;
    check_delta(delta)?;
    let norm = retained_fraction(src.g(), delta);
    let points = panels(0.0, delta, 1.0, 10_000);
    let branch = |same: bool| -> Result<f64> {
        let err = std::cell::Cell::new(None);
        let f = |tau: f64| match crate::jump_dynamics::second_click_density(src, 0.0, tau, same) {
            Ok(p) => p / norm,
            Err(e) => {
                err.set(Some(e));
                0.0
            }
        };
        let v = window_integrator().integrate(f, &points)?.value;
        match err.take() {
            Some(e) => Err(e),
            None => Ok(v),
        }
    };
    let same = branch(true)?;
    let diff = branch(false)?;
    Ok(((same - diff) / (same + diff)).abs().min(1.0))
}

/// Closed-form `ν′_M(Δ) = θ(1 - e^{-2AπΔ/θ}) / (2AπΔ)` for a Markovian bath,
/// valid when `gΔ ≪ 1`.
pub fn windowed_visibility_markovian(bath: &BathSpec, delta: f64) -> Result<f64> {
    if bath.family() != SpectralFamily::Markovian {
        return Err(Error::Unsupported(
            "windowed_visibility_markovian needs a Markovian bath".into(),
        ));
    }
    check_delta(delta)?;
    let x = 2.0 * bath.coupling() * PI * delta / bath.theta();
    if x < 1e-6 {
        return Ok(1.0 - x / 2.0 + x * x / 6.0);
    }
    Ok(-(-x).exp_m1() / x)
}

/// Window average `(1/Δ) ∫₀^Δ (1 + v²)^{-p} dv`.
///
/// Evaluated as `B_x(1/2, p - 1/2) / (2Δ)` with `x = Δ²/(1 + Δ²)`, which is
/// the real form of `B_{-Δ²}(1/2, 1 - p) / (2iΔ)`.
pub fn power_window_average(exponent: f64, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    ensure(exponent.is_finite() && exponent >= 0.0, || {
        format!("exponent must be finite and nonnegative, got {exponent}")
    })?;
    if exponent == 0.0 {
        return Ok(1.0);
    }
    if delta < 1e-4 {
        // 1 - pΔ²/3 + p(p+1)Δ⁴/10
        let d2 = delta * delta;
        return Ok(1.0 - exponent * d2 / 3.0 + exponent * (exponent + 1.0) * d2 * d2 / 10.0);
    }
    let x = delta * delta / (1.0 + delta * delta);
    let b = incomplete_beta(x, 0.5, exponent - 0.5)
        .ok_or_else(|| Error::Domain(format!("incomplete Beta undefined for p = {exponent}")))?;
    Ok(b / (2.0 * delta))
}

/// The same window average through the complex-argument representation
/// `B_{-Δ²}(1/2, 1 - p) / (2iΔ)`, summed as a power series. Needs `Δ < 1`.
pub fn power_window_average_complex(exponent: f64, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    ensure(delta < 1.0, || "the power series needs Δ < 1".into())?;
    let z = Complex64::new(-delta * delta, 0.0);
    let b = crate::special::incomplete_beta_series(z, 0.5, 1.0 - exponent)
        .ok_or_else(|| Error::Domain("incomplete Beta series did not converge".into()))?;
    Ok((b / Complex64::new(0.0, 2.0 * delta)).re)
}

/// Low-temperature ohmic `ν′(Δ)`: window average of the zero-temperature
/// visibility `(1 + τ²)^{-A}`, valid when `gΔ ≪ 1` and `θ → ∞`.
pub fn windowed_visibility_ohmic_low_temperature(bath: &BathSpec, delta: f64) -> Result<f64> {
    if bath.family() != SpectralFamily::Ohmic {
        return Err(Error::Unsupported(
            "windowed_visibility_ohmic_low_temperature needs an ohmic bath".into(),
        ));
    }
    Ok(power_window_average(bath.coupling(), delta)?.clamp(0.0, 1.0))
}

/// Long-time visibility floor of a superohmic bath,
/// `exp(-2A(1 + 2ψ'(1 + 1/θ)/θ²))`.
pub fn superohmic_asymptote(bath: &BathSpec) -> Result<f64> {
    if bath.family() != SpectralFamily::Superohmic {
        return Err(Error::Unsupported(
            "superohmic_asymptote needs a superohmic bath".into(),
        ));
    }
    let theta = bath.theta();
    let thermal = 2.0 * trigamma(Complex64::new(1.0 + 1.0 / theta, 0.0)).re / (theta * theta);
    Ok((-2.0 * bath.coupling() * (1.0 + thermal)).exp())
}

/// `θ ≫ 1` form of [`superohmic_asymptote`]: `exp(-2A(1 + π²/(3θ²)))`.
pub fn superohmic_asymptote_scaling_limit(bath: &BathSpec) -> Result<f64> {
    if bath.family() != SpectralFamily::Superohmic {
        return Err(Error::Unsupported(
            "superohmic_asymptote needs a superohmic bath".into(),
        ));
    }
    let theta = bath.theta();
    Ok((-2.0 * bath.coupling() * (1.0 + PI * PI / (3.0 * theta * theta))).exp())
}

/// Post-selected visibility for arbitrary sources, accepting pairs with
/// `τ ≤ delta` and (optionally) `t₁ ≤ t1_max`:
///
/// ```text
/// |∫∫ 2g e^{-2g t₁} g e^{-gτ} κ(t₁, τ)| / ∫∫ 2g e^{-2g t₁} g e^{-gτ}
/// ```
///
/// The first-click time is integrated in `u = e^{-2g t₁}`, which maps an
/// unbounded `t₁` range onto `(0, 1]`.
pub fn windowed_visibility_nonidentical(
    src: &SourceConfig,
    delta: f64,
    t1_max: Option<f64>,
) -> Result<f64> {
    check_delta(delta)?;
    if let Some(t) = t1_max {
        check_delta(t)?;
    }
    let g = src.g();
    let inner_norm = retained_fraction(g, delta);
    let u_min = t1_max.map_or(0.0, |t| (-2.0 * g * t).exp());
    let err = std::cell::Cell::new(None);
    let record = |r: Result<f64>| match r {
        Ok(v) => v,
        Err(e) => {
            err.set(Some(e));
            0.0
        }
    };
    let inner = |u: f64| -> f64 {
        if u <= 0.0 {
            // t₁ → ∞ carries zero weight after the substitution
            return 0.0;
        }
        let t1 = -u.ln() / (2.0 * g);
        let f = |tau: f64| {
            g * (-g * tau).exp() / inner_norm * record(interference_factor(src, t1, tau))
        };
        record(
            Integrator::new(1e-11, 0.0)
                .integrate(f, &panels(0.0, delta, 1.0, 10_000))
                .map(|r| r.value),
        )
    };
    let outer = Integrator::new(1e-10, 0.0).integrate(inner, &[u_min, 1.0])?;
    if let Some(e) = err.take() {
        return Err(e);
    }
    Ok((outer.value / (1.0 - u_min)).abs().min(1.0))
}

/// Which visibility a curve samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveKind {
    /// `ν(τ)` against click separation.
    TimeResolved,
    /// `ν′(Δ)` against window width.
    Windowed,
}

/// Visibility sampled on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VisibilityCurve {
    pub kind: CurveKind,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl VisibilityCurve {
    pub fn new(kind: CurveKind, grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_grid(&grid)?;
        ensure(grid.len() == values.len(), || {
            "grid and values differ in length".into()
        })?;
        ensure(values.iter().all(|v| (0.0..=1.0).contains(v)), || {
            "visibilities must lie in [0, 1]".into()
        })?;
        Ok(Self { kind, grid, values })
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.iter().copied().zip(self.values.iter().copied())
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    ensure(grid.iter().all(|x| x.is_finite() && *x >= 0.0), || {
        "grid points must be finite and nonnegative".into()
    })?;
    ensure(grid.windows(2).all(|w| w[1] > w[0]), || {
        "grid must be strictly increasing".into()
    })
}

/// Evaluate [`visibility`] or [`windowed_visibility`] on every grid point.
/// Points are evaluated in parallel; the result does not depend on order.
pub fn sample_curve(kind: CurveKind, src: &SourceConfig, grid: &[f64]) -> Result<VisibilityCurve> {
    check_grid(grid)?;
    let values = grid
        .par_iter()
        .map(|&x| match kind {
            CurveKind::TimeResolved => visibility(src, x),
            CurveKind::Windowed => windowed_visibility(src, x),
        })
        .collect::<Result<Vec<_>>>()?;
    VisibilityCurve::new(kind, grid.to_vec(), values)
}

/// `n` evenly spaced points from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n)
            .map(|k| {
                if k == n - 1 {
                    stop
                } else {
                    start + (stop - start) * k as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// `n` logarithmically spaced points from `start` to `stop` inclusive.
pub fn logspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    linspace(start.ln(), stop.ln(), n)
        .into_iter()
        .map(f64::exp)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn src(bath: BathSpec, g: f64) -> SourceConfig {
        SourceConfig::identical(g, bath).unwrap()
    }

    fn reference_baths() -> [BathSpec; 3] {
        [
            BathSpec::ohmic(0.5, 10.0).unwrap(),
            BathSpec::superohmic(0.5, 10.0).unwrap(),
            BathSpec::markovian(0.5, 10.0).unwrap(),
        ]
    }

    #[test]
    fn visibility_basics() {
        for b in reference_baths() {
            assert_eq!(visibility(&src(b, 0.01), 0.0).unwrap(), 1.0);
        }
        let m = src(BathSpec::markovian(0.5, 10.0).unwrap(), 0.01);
        let v = visibility(&m, 1.0).unwrap();
        assert!((v - (-PI / 10.0).exp()).abs() < 1e-15);
        assert!((v - 0.73040).abs() < 1e-5);
    }

    #[test]
    fn visibility_requires_identical_sources() {
        let mixed = SourceConfig::pair(
            0.01,
            BathSpec::ohmic(0.25, 10.0).unwrap(),
            BathSpec::ohmic(0.5, 10.0).unwrap(),
        )
        .unwrap();
        assert_eq!(visibility(&mixed, 1.0), Err(Error::NotIdentical));
        assert_eq!(windowed_visibility(&mixed, 1.0), Err(Error::NotIdentical));
    }

    #[test]
    fn nonidentical_value() {
        let b1 = BathSpec::ohmic(0.25, 10.0).unwrap();
        let b2 = BathSpec::ohmic(0.5, 10.0).unwrap();
        let mixed = SourceConfig::pair(0.01, b1, b2).unwrap();
        let v = visibility_nonidentical(&mixed, 0.0, 1.0).unwrap();
        let gam = bath::gamma_closed(&b1, 1.0).unwrap().gamma
            + bath::gamma_closed(&b2, 1.0).unwrap().gamma;
        let expect = (-gam).exp() * (0.25 * (1.0 - PI / 4.0)).cos();
        assert!((v - expect).abs() < 1e-14);
    }

    #[test]
    fn superohmic_remnant() {
        let s = BathSpec::superohmic(0.5, 10.0).unwrap();
        let exact = superohmic_asymptote(&s).unwrap();
        let nu = visibility(&src(s, 0.01), 200.0).unwrap();
        assert!((exact - nu).abs() < 1e-5);
        assert!((exact - 0.357_483_531_724_336_6).abs() < 1e-13, "{exact}");
        let limit = superohmic_asymptote_scaling_limit(&s).unwrap();
        assert!((limit - 0.355_973_609_556_574_8).abs() < 1e-14);
        assert_eq!(
            superohmic_asymptote(&s.with_coupling(0.0).unwrap()).unwrap(),
            1.0
        );
        assert!(superohmic_asymptote(&BathSpec::ohmic(0.5, 10.0).unwrap()).is_err());
    }

    #[test]
    fn markovian_closed_window() {
        let m = BathSpec::markovian(0.5, 10.0).unwrap();
        let v = windowed_visibility_markovian(&m, 1.0).unwrap();
        assert!((v - 10.0 / PI * (1.0 - (-PI / 10.0).exp())).abs() < 1e-15);
        assert!((v - 0.858_154_887_277_618_7).abs() < 1e-14);
        assert!((windowed_visibility_markovian(&m, 1e-9).unwrap() - 1.0).abs() < 1e-9);
        let doubled = m.with_coupling(1.0).unwrap();
        assert!((windowed_visibility_markovian(&doubled, 1e-9).unwrap() - 1.0).abs() < 1e-9);
        // series branch joins the direct branch
        let x = 1e-6 * 10.0 / PI;
        let a = windowed_visibility_markovian(&m, x * 0.999_999).unwrap();
        let b = windowed_visibility_markovian(&m, x * 1.000_001).unwrap();
        assert!((a - b).abs() < 1e-12);
        assert!(windowed_visibility_markovian(&m, 0.0).is_err());
    }

    #[test]
    fn windowed_forms_agree() {
        for b in reference_baths() {
            let s = src(b, 0.01);
            for delta in [1e-3, 0.3, 1.0, 4.0, 10.0] {
                let a = windowed_visibility(&s, delta).unwrap();
                let c = windowed_visibility_from_densities(&s, delta).unwrap();
                assert!(
                    (a - c).abs() < 1e-8,
                    "{:?} Δ={delta}: {a} vs {c}",
                    b.family()
                );
            }
        }
    }

    #[test]
    fn windowed_without_dephasing_is_one() {
        let s = src(BathSpec::ohmic(0.0, 10.0).unwrap(), 0.01);
        for delta in [0.1, 1.0, 10.0] {
            assert!((windowed_visibility(&s, delta).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn windowed_matches_markovian_closed_form_for_small_g() {
        let m = BathSpec::markovian(0.5, 10.0).unwrap();
        let s = src(m, 1e-4);
        for delta in [0.1, 0.5, 1.0] {
            let a = windowed_visibility(&s, delta).unwrap();
            let c = windowed_visibility_markovian(&m, delta).unwrap();
            assert!((a - c).abs() < 1e-5, "Δ={delta}");
        }
    }

    #[test]
    fn power_window_average_cases() {
        // p = 1: atan Δ / Δ
        assert!((power_window_average(1.0, 1.0).unwrap() - PI / 4.0).abs() < 1e-12);
        // p = 1/2: asinh Δ / Δ (b = 0 branch)
        let d: f64 = 2.0;
        assert!((power_window_average(0.5, d).unwrap() - d.asinh() / d).abs() < 1e-12);
        // integer lift from b = -1/2
        let q = Integrator::new(1e-13, 1e-13)
            .integrate(|v: f64| (1.0 + v * v).powf(-0.25), &[0.0, 2.0])
            .unwrap();
        assert!((power_window_average(0.25, 2.0).unwrap() - q.value / 2.0).abs() < 1e-12);
        assert!((power_window_average(0.7, 1e-6).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn complex_beta_representation() {
        // A = 0.3 in the printed parameterisation is p = 2A = 0.6
        let real = power_window_average(0.6, 0.1).unwrap();
        let complex = power_window_average_complex(0.6, 0.1).unwrap();
        assert!((real - complex).abs() < 1e-8);
    }

    #[test]
    fn ohmic_low_temperature_window_matches_zero_temperature_quadrature() {
        for a in [0.25, 0.5, 1.3] {
            let b = BathSpec::ohmic(a, 1e12).unwrap();
            for delta in [0.2, 1.0, 3.0] {
                let closed = windowed_visibility_ohmic_low_temperature(&b, delta).unwrap();
                let numeric = windowed_visibility(&src(b, 1e-9), delta).unwrap();
                assert!((closed - numeric).abs() < 1e-7, "A={a} Δ={delta}");
            }
        }
        let unit = BathSpec::ohmic(1.0, 10.0).unwrap();
        assert!(
            (windowed_visibility_ohmic_low_temperature(&unit, 1.0).unwrap() - PI / 4.0).abs()
                < 1e-12
        );
    }

    #[test]
    fn nonidentical_window_reduces_to_identical() {
        let b = BathSpec::ohmic(0.5, 10.0).unwrap();
        let s = src(b, 0.05);
        let a = windowed_visibility(&s, 2.0).unwrap();
        let n = windowed_visibility_nonidentical(&s, 2.0, None).unwrap();
        let t = windowed_visibility_nonidentical(&s, 2.0, Some(3.0)).unwrap();
        assert!((a - n).abs() < 1e-8);
        assert!((a - t).abs() < 1e-8);
    }

    #[test]
    fn curve_sampling() {
        let s = src(BathSpec::ohmic(0.5, 10.0).unwrap(), 0.01);
        let c = sample_curve(CurveKind::TimeResolved, &s, &[0.0]).unwrap();
        assert_eq!(c.values, vec![1.0]);
        assert!(sample_curve(CurveKind::TimeResolved, &s, &[1.0, 1.0]).is_err());
        let grid = linspace(0.0, 10.0, 200);
        assert_eq!(grid.len(), 200);
        assert_eq!(grid[199], 10.0);
        let c = sample_curve(CurveKind::TimeResolved, &s, &grid).unwrap();
        assert!(c.values.windows(2).all(|w| w[1] <= w[0]));
    }
}
