//! Monte Carlo click records and post-selected visibility estimates.
//!
//! The solved click densities factor into an exponential first-click time
//! (rate `2g`), a fair first detector, an exponential separation (rate `g`)
//! and a Bernoulli choice of second detector with
//! `P(same) = (1 + κ(t₁, τ))/2`. Each record is drawn exactly by inverse
//! transform from its own ChaCha stream, so an ensemble is a pure function of
//! `(seed, n, source)` however the work is split across threads.

use std::io::{self, BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bath::{self, BathSpec, SpectralFamily};
use crate::error::{ensure, Error, Result};
use crate::interference::{CurveKind, VisibilityCurve};
use crate::jump_dynamics::{Detector, SourceConfig};

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// One two-photon detection event.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClickRecord {
    pub t1: f64,
    pub d1: Detector,
    pub tau: f64,
    pub d2: Detector,
}

impl ClickRecord {
    pub fn same_detector(&self) -> bool {
        self.d1 == self.d2
    }

    /// Swap `D₊` and `D₋` in both clicks.
    pub fn relabelled(&self) -> Self {
        Self {
            d1: self.d1.flip(),
            d2: self.d2.flip(),
            ..*self
        }
    }
}

/// Cubic Hermite table of `Γ(τ)` on `[0, tau_cap]`.
///
/// Nodes are spaced by `step` up to `τ = 10`, and by `step · τ/10` beyond,
/// following the slower variation of `Γ` at long times.
#[derive(Debug, Clone)]
pub struct GammaTable {
    bath: BathSpec,
    nodes: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl GammaTable {
    pub fn build(bath: BathSpec, tau_cap: f64, step: f64) -> Result<Self> {
        ensure(tau_cap.is_finite() && tau_cap > 0.0, || {
            format!("table range must be positive, got {tau_cap}")
        })?;
        ensure(step > 0.0 && step < tau_cap, || {
            format!("table step must lie in (0, {tau_cap}), got {step}")
        })?;
        let mut nodes = vec![0.0];
        let mut t: f64 = 0.0;
        while t < tau_cap {
            t = (t + step * (t / 10.0).max(1.0)).min(tau_cap);
            nodes.push(t);
        }
        let pairs = nodes
            .par_iter()
            .map(|&tau| {
                Ok((
                    bath::gamma(&bath, tau)?,
                    bath::gamma_rate_quadrature(&bath, tau)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let (values, slopes) = pairs.into_iter().unzip();
        Ok(Self {
            bath,
            nodes,
            values,
            slopes,
        })
    }

    pub fn tau_cap(&self) -> f64 {
        *self.nodes.last().unwrap_or(&0.0)
    }

    /// Interpolated `Γ(τ)`; falls back to direct evaluation past the table.
    pub fn gamma(&self, tau: f64) -> Result<f64> {
        if tau > self.tau_cap() {
            return bath::gamma(&self.bath, tau);
        }
        let i = self
            .nodes
            .partition_point(|&x| x <= tau)
            .clamp(1, self.nodes.len() - 1);
        let (x0, x1) = (self.nodes[i - 1], self.nodes[i]);
        let h = x1 - x0;
        let s = (tau - x0) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        Ok(h00 * self.values[i - 1]
            + h10 * h * self.slopes[i - 1]
            + h01 * self.values[i]
            + h11 * h * self.slopes[i])
    }
}

#[derive(Debug, Clone)]
enum GammaSource {
    Direct(BathSpec),
    Table(GammaTable),
}

impl GammaSource {
    fn gamma(&self, tau: f64) -> Result<f64> {
        match self {
            GammaSource::Direct(b) => bath::gamma(b, tau),
            GammaSource::Table(t) => t.gamma(tau),
        }
    }
}

/// Options for [`Sampler`].
#[derive(Debug, Clone, Copy)]
pub struct SamplerOptions {
    /// Tabulate `Γ` on `[0, cap]` for baths without a closed form.
    pub table_cap: Option<f64>,
    pub table_step: f64,
}

impl Default for SamplerOptions {
    fn default() -> Self {
        Self {
            table_cap: Some(200.0),
            table_step: 0.02,
        }
    }
}

/// Exact sampler of click records for one source configuration.
#[derive(Debug, Clone)]
pub struct Sampler {
    src: SourceConfig,
    gamma1: GammaSource,
    gamma2: GammaSource,
}

impl Sampler {
    pub fn new(src: SourceConfig) -> Result<Self> {
        Self::with_options(src, SamplerOptions::default())
    }

    pub fn with_options(src: SourceConfig, opts: SamplerOptions) -> Result<Self> {
        let make = |b: &BathSpec| -> Result<GammaSource> {
            match (b.family(), opts.table_cap) {
                (SpectralFamily::PowerLaw(_), Some(cap)) if b.coupling() > 0.0 => Ok(
                    GammaSource::Table(GammaTable::build(*b, cap, opts.table_step)?),
                ),
                _ => Ok(GammaSource::Direct(*b)),
            }
        };
        let gamma1 = make(src.bath1())?;
        let gamma2 = if src.is_identical() {
            gamma1.clone()
        } else {
            make(src.bath2())?
        };
        Ok(Self {
            src,
            gamma1,
            gamma2,
        })
    }

    pub fn source(&self) -> &SourceConfig {
        &self.src
    }

    /// `κ(t₁, τ)`, the excess probability of repeating the first detector.
    pub fn interference(&self, t1: f64, tau: f64) -> Result<f64> {
        if self.src.is_identical() {
            return Ok((-2.0 * self.gamma1.gamma(tau)?).exp());
        }
        let total = self.gamma1.gamma(tau)? + self.gamma2.gamma(tau)?;
        let phase = bath::phi(self.src.bath1(), self.src.bath2(), t1, t1 + tau)?;
        Ok((-total).exp() * phase.cos())
    }

    /// Draw one record. Consumes exactly four uniforms from `rng`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<ClickRecord> {
        let g = self.src.g();
        let u1: f64 = rng.random();
        let u2: f64 = rng.random();
        let u3: f64 = rng.random();
        let u4: f64 = rng.random();
        let t1 = exponential(u1, 2.0 * g);
        let d1 = if u2 < 0.5 {
            Detector::Plus
        } else {
            Detector::Minus
        };
        let tau = exponential(u3, g);
        let p_same = 0.5 * (1.0 + self.interference(t1, tau)?);
        let d2 = if u4 < p_same { d1 } else { d1.flip() };
        Ok(ClickRecord { t1, d1, tau, d2 })
    }
}

/// Inverse transform of a uniform `u ∈ [0, 1)` to an exponential variate.
fn exponential(u: f64, rate: f64) -> f64 {
    -(-u).ln_1p() / rate
}

/// Draw one record for `src` from `rng`.
pub fn sample_record<R: Rng + ?Sized>(rng: &mut R, src: &SourceConfig) -> Result<ClickRecord> {
    Sampler::new(*src)?.sample(rng)
}

/// Random stream for record `index` of the ensemble seeded by `seed`.
pub fn record_stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `n` records for `src`, using all available threads.
pub fn simulate_ensemble(seed: u64, n: usize, src: &SourceConfig) -> Result<Vec<ClickRecord>> {
    simulate_with(seed, n, &Sampler::new(*src)?, None)
}

/// `n` records drawn with `sampler` on `workers` threads (all available when
/// `None`). Output does not depend on the number of workers.
pub fn simulate_with(
    seed: u64,
    n: usize,
    sampler: &Sampler,
    workers: Option<usize>,
) -> Result<Vec<ClickRecord>> {
    ensure(n >= 1, || "ensemble size must be at least 1".into())?;
    let run = || {
        (0..n as u64)
            .into_par_iter()
            .map(|i| sampler.sample(&mut record_stream(seed, i)))
            .collect::<Result<Vec<_>>>()
    };
    match workers {
        None => run(),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::Domain(format!("cannot start worker pool: {e}")))?
            .install(run),
    }
}

/// Post-selection window on click separation and, optionally, first-click time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    delta: f64,
    t1_max: Option<f64>,
}

impl Window {
    /// Accept `τ ≤ delta`. `f64::INFINITY` is allowed and models a detector
    /// without time resolution.
    pub fn new(delta: f64) -> Result<Self> {
        ensure(delta > 0.0 && !delta.is_nan(), || {
            format!("window width must be positive, got {delta}")
        })?;
        Ok(Self {
            delta,
            t1_max: None,
        })
    }

    /// Additionally accept only `t₁ ≤ t1_max`.
    pub fn with_t1_max(self, t1_max: f64) -> Result<Self> {
        ensure(t1_max > 0.0 && !t1_max.is_nan(), || {
            format!("first-click cut must be positive, got {t1_max}")
        })?;
        Ok(Self {
            t1_max: Some(t1_max),
            ..self
        })
    }

    pub fn unbounded() -> Self {
        Self {
            delta: f64::INFINITY,
            t1_max: None,
        }
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn t1_max(&self) -> Option<f64> {
        self.t1_max
    }

    pub fn accepts(&self, r: &ClickRecord) -> bool {
        r.tau <= self.delta && self.t1_max.is_none_or(|t| r.t1 <= t)
    }
}

/// Visibility estimated from post-selected counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VisibilityEstimate {
    pub n_same: u64,
    pub n_diff: u64,
    pub nu_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Retained fraction of all records.
    pub efficiency: f64,
}

impl VisibilityEstimate {
    /// Point estimate and 95% interval from same/different counts.
    ///
    /// A Wilson score interval on `p_same` is folded through `ν = |2p - 1|`;
    /// an interval straddling `p = 1/2` folds to `[0, max |2p - 1|]`.
    pub fn from_counts(n_same: u64, n_diff: u64, total: u64) -> Result<Self> {
        let n = n_same + n_diff;
        if n == 0 {
            return Err(Error::EmptyEnsemble {
                total: total as usize,
            });
        }
        let nf = n as f64;
        let p = n_same as f64 / nf;
        let z2 = Z_95 * Z_95;
        let denom = 1.0 + z2 / nf;
        let center = (p + z2 / (2.0 * nf)) / denom;
        let half = Z_95 * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
        let (lo, hi) = ((center - half).max(0.0), (center + half).min(1.0));
        let fold = |q: f64| (2.0 * q - 1.0).abs();
        let nu_hat = fold(p);
        let (ci_low, ci_high) = if lo >= 0.5 {
            (2.0 * lo - 1.0, 2.0 * hi - 1.0)
        } else if hi <= 0.5 {
            (1.0 - 2.0 * hi, 1.0 - 2.0 * lo)
        } else {
            (0.0, fold(lo).max(fold(hi)))
        };
        Ok(Self {
            n_same,
            n_diff,
            nu_hat,
            ci_low: ci_low.min(nu_hat),
            ci_high: ci_high.max(nu_hat),
            efficiency: if total == 0 { 0.0 } else { nf / total as f64 },
        })
    }

    pub fn retained(&self) -> u64 {
        self.n_same + self.n_diff
    }

    /// Binomial standard error of `nu_hat`, `2 √(p(1-p)/n)`.
    pub fn std_error(&self) -> f64 {
        let n = self.retained() as f64;
        let p = self.n_same as f64 / n;
        2.0 * (p * (1.0 - p) / n).sqrt()
    }
}

/// Count same/different-detector pairs inside `window`.
pub fn estimate_visibility(records: &[ClickRecord], window: &Window) -> Result<VisibilityEstimate> {
    let (same, diff) = records
        .par_iter()
        .filter(|r| window.accepts(r))
        .map(|r| {
            if r.same_detector() {
                (1u64, 0u64)
            } else {
                (0, 1)
            }
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    VisibilityEstimate::from_counts(same, diff, records.len() as u64)
}

/// One separation bin of [`binned_visibility`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bin {
    pub lo: f64,
    pub hi: f64,
    pub n: u64,
    /// `None` when the bin holds no records.
    pub estimate: Option<VisibilityEstimate>,
}

impl Bin {
    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Empirical `ν(τ)` grouped by click separation.
#[derive(Debug, Clone, PartialEq)]
pub struct BinnedVisibility {
    pub bins: Vec<Bin>,
}

impl BinnedVisibility {
    /// Midpoints and estimates of the populated bins.
    pub fn to_curve(&self) -> Result<VisibilityCurve> {
        let (grid, values) = self
            .bins
            .iter()
            .filter_map(|b| b.estimate.map(|e| (b.mid(), e.nu_hat)))
            .unzip();
        VisibilityCurve::new(CurveKind::TimeResolved, grid, values)
    }
}

/// Bin records by `tau` on `[edges[i], edges[i+1])` (the last bin also takes
/// its right edge) and estimate the visibility in each.
pub fn binned_visibility(records: &[ClickRecord], edges: &[f64]) -> Result<BinnedVisibility> {
    ensure(edges.len() >= 2, || "need at least two bin edges".into())?;
    ensure(
        edges.iter().all(|e| e.is_finite()) && edges.windows(2).all(|w| w[1] > w[0]),
        || "bin edges must be finite and strictly increasing".into(),
    )?;
    let nbins = edges.len() - 1;
    let last = edges[nbins];
    let counts = records
        .par_iter()
        .fold(
            || vec![(0u64, 0u64); nbins],
            |mut acc, r| {
                if r.tau >= edges[0] && r.tau <= last {
                    let i = (edges.partition_point(|&e| e <= r.tau) - 1).min(nbins - 1);
                    if r.same_detector() {
                        acc[i].0 += 1;
                    } else {
                        acc[i].1 += 1;
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![(0u64, 0u64); nbins],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    x.0 += y.0;
                    x.1 += y.1;
                }
                a
            },
        );
    let total = records.len() as u64;
    let bins = counts
        .into_iter()
        .enumerate()
        .map(|(i, (same, diff))| Bin {
            lo: edges[i],
            hi: edges[i + 1],
            n: same + diff,
            estimate: VisibilityEstimate::from_counts(same, diff, total).ok(),
        })
        .collect();
    Ok(BinnedVisibility { bins })
}

/// Write records as JSON lines.
pub fn write_records<W: Write>(records: &[ClickRecord], mut out: W) -> io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

/// Read JSON-lines records, skipping blank lines.
pub fn read_records<R: BufRead>(input: R) -> io::Result<Vec<ClickRecord>> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let r = serde_json::from_str(&line).map_err(|e| {
            io::Error::new(io::ErrorKind::InvalidData, format!("line {}: {e}", i + 1))
        })?;
        out.push(r);
    }
    Ok(out)
}
