//! Special functions used by the closed-form decoherence and window formulas.

use num_complex::Complex64;

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_741_780_329_736_406;

// B_{2k} / (2k (2k - 1)) for k = 1..8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

// Bernoulli numbers B_{2k} for k = 1..8
const BERNOULLI: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

const SHIFT: f64 = 16.0;

fn stirling_tail(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut term = inv;
    let mut acc = Complex64::new(0.0, 0.0);
    for c in STIRLING {
        acc += term * c;
        term *= inv2;
    }
    acc
}

/// Real part of ln Γ(z) for Re z > 0.
///
/// Only the real part is returned, so the branch of the complex logarithm
/// never matters.
pub fn ln_gamma_re(z: Complex64) -> f64 {
    debug_assert!(z.re > 0.0);
    let mut z = z;
    let mut shift = 0.0;
    while z.re < SHIFT {
        shift += z.norm().ln();
        z += 1.0;
    }
    let main = (z - 0.5) * z.ln() - z + HALF_LN_2PI + stirling_tail(z);
    main.re - shift
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    ln_gamma_re(Complex64::new(x, 0.0))
}

/// Trigamma ψ'(z) for Re z > 0.
pub fn trigamma(z: Complex64) -> Complex64 {
    debug_assert!(z.re > 0.0);
    let mut z = z;
    let mut acc = Complex64::new(0.0, 0.0);
    while z.re < SHIFT {
        acc += (z * z).inv();
        z += 1.0;
    }
    // ψ'(z) ~ 1/z + 1/(2z²) + Σ B_{2k} / z^{2k+1}
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = inv + inv2 * 0.5;
    let mut term = inv2 * inv;
    for b in BERNOULLI {
        series += term * b;
        term *= inv2;
    }
    acc + series
}

/// Non-regularized incomplete Beta function
/// `B_x(a, b) = ∫_0^x t^(a-1) (1-t)^(b-1) dt` for `0 <= x < 1`, `a > 0`.
///
/// `b` may be zero or negative. Non-positive `b` is lifted with
/// `B_x(a, b) = [(a + b) B_x(a, b + 1) - x^a (1-x)^b] / b`, and `b = 0`
/// has a closed branch for `a = 1/2`. Returns `None` outside that domain.
pub fn incomplete_beta(x: f64, a: f64, b: f64) -> Option<f64> {
    if !(0.0..1.0).contains(&x) || a <= 0.0 || !b.is_finite() {
        return None;
    }
    if x == 0.0 {
        return Some(0.0);
    }
    if b == 0.0 {
        // ∫ t^{-1/2} / (1 - t) dt = 2 atanh(√x)
        return (a == 0.5).then(|| 2.0 * x.sqrt().atanh());
    }
    if b < 0.0 {
        let lifted = incomplete_beta(x, a, b + 1.0)?;
        let boundary = (a * x.ln() + b * (-x).ln_1p()).exp();
        return Some(((a + b) * lifted - boundary) / b);
    }
    if x < (a + 1.0) / (a + b + 2.0) {
        Some(beta_continued_fraction(x, a, b))
    } else {
        let complete = (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp();
        Some(complete - beta_continued_fraction(1.0 - x, b, a))
    }
}

/// `x^a (1-x)^b / a` times the modified Lentz continued fraction.
fn beta_continued_fraction(x: f64, a: f64, b: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    let prefactor = (a * x.ln() + b * (-x).ln_1p()).exp() / a;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=10_000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    prefactor * h
}

/// Power series of the incomplete Beta function at complex argument,
/// `B_z(a, b) = z^a Σ_k (1-b)_k z^k / (k! (a + k))`, principal branch of
/// `z^a`. Converges for `|z| < 1`.
pub fn incomplete_beta_series(z: Complex64, a: f64, b: f64) -> Option<Complex64> {
    if z.norm() >= 1.0 || a <= 0.0 {
        return None;
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut pochhammer = Complex64::new(1.0, 0.0);
    for k in 0..100_000 {
        let k = k as f64;
        let term = pochhammer / (a + k);
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            return Some(z.powf(a) * sum);
        }
        pochhammer *= z * ((1.0 - b + k) / (k + 1.0));
    }
    None
}
