use std::f64::consts::PI;

use serde::Serialize;

use super::{LatticeSumResult, ShellTable, SumMethod};
use crate::error::{require, Result};
use crate::quadrature::{integrate, integrate_to_infinity, QuadOptions};

/// `-1/2 [p^2 + c - sqrt(p^4 + 2 c p^2) - c^2/(2 p^2)]` as a function of `p^2`,
/// rearranged to avoid cancellation; it is positive and behaves like
/// `c^3/(4 p^4)` for large `p`.
pub fn bogoliubov_summand(c: f64, p2: f64) -> f64 {
    let s = (p2 * p2 + 2.0 * c * p2).sqrt();
    c * c * c * (1.0 + 2.0 * p2 / (p2 + s)) / (4.0 * p2 * (p2 + c + s))
}

/// Smooth step from 1 (at `u <= 0`) to 0 (at `u >= 1`), infinitely differentiable.
fn taper(u: f64) -> f64 {
    if u <= 0.0 {
        1.0
    } else if u >= 1.0 {
        0.0
    } else {
        1.0 / (1.0 + (1.0 / (1.0 - u) - 1.0 / u).exp())
    }
}

/// Shell sum with a smooth radial taper between `|n| = sqrt(kmax)/2` and
/// `sqrt(kmax)`, plus the continuum integral of the tapered-off remainder.
/// With a smooth taper the lattice sum of the remainder equals its integral up
/// to rapidly decaying Poisson terms, so no sharp-sphere fluctuations enter.
/// Momenta are `h n` with `n` in `Z^3`; the result is `sum_n summand(h n)`.
fn tapered_value(table: &ShellTable, c: f64, h: f64, kmax: u64) -> Result<f64> {
    let s1 = (kmax as f64).sqrt();
    let s0 = 0.5 * s1;
    let f = |s: f64| bogoliubov_summand(c, h * h * s * s);
    let head = table.sum(kmax, |k| {
        let s = (k as f64).sqrt();
        f(s) * taper((s - s0) / (s1 - s0))
    });
    let opts = QuadOptions::tol(1e-300, 1e-12);
    let blend = integrate(|s| s * s * f(s) * (1.0 - taper((s - s0) / (s1 - s0))), s0, s1, opts)?.value;
    let rest = integrate_to_infinity(|s| s * s * f(s), s1, opts)?.value;
    Ok(head + 4.0 * PI * (blend + rest))
}

/// `-1/2 sum_{p in 2 pi Z^3 \ 0} [p^2 + 8 pi a0 - sqrt(p^4 + 16 pi a0 p^2) - (8 pi a0)^2/(2 p^2)]`
/// using shells `|n|^2 <= kmax`; the error estimate is the change from `kmax/2`.
pub fn bogoliubov_lattice_sum_with(a0: f64, kmax: u64) -> Result<LatticeSumResult> {
    require(a0 >= 0.0 && a0.is_finite(), || format!("a0 must be nonnegative, got {a0}"))?;
    require(kmax >= 64, || "shell cutoff must be at least 64".into())?;
    if a0 == 0.0 {
        return Ok(LatticeSumResult { value: 0.0, truncation: kmax, error_estimate: 0.0, method: SumMethod::Shells });
    }
    let c = 8.0 * PI * a0;
    let table = ShellTable::new(kmax);
    let value = tapered_value(&table, c, 2.0 * PI, kmax)?;
    let coarse = tapered_value(&table, c, 2.0 * PI, kmax / 2)?;
    Ok(LatticeSumResult { value, truncation: kmax, error_estimate: (value - coarse).abs() + 1e-14 * value.abs(), method: SumMethod::Shells })
}

/// As [`bogoliubov_lattice_sum_with`] with a cutoff well beyond the sound scale.
pub fn bogoliubov_lattice_sum(a0: f64) -> Result<LatticeSumResult> {
    let c = 8.0 * PI * a0.max(0.0);
    let s = 120.0 * c.sqrt() / (2.0 * PI);
    let kmax = ((s * s).ceil() as u64).clamp(16_384, 4_000_000);
    bogoliubov_lattice_sum_with(a0, kmax)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SumVsIntegral {
    pub sum: f64,
    /// Closed form `4 pi a0 (128/(15 sqrt pi)) a0^{3/2} R^{5/2}`.
    pub integral: f64,
    /// The same integral by radial quadrature.
    pub integral_quadrature: f64,
    pub ratio: Option<f64>,
    pub shells: u64,
}

/// `128 / (15 sqrt(pi))`.
pub fn lhy_coefficient() -> f64 {
    128.0 / (15.0 * PI.sqrt())
}

/// Compare the rescaled lattice sum over `(2 pi/sqrt(R)) Z^3 \ 0` of
/// `-(R/2)[p^2 + c - sqrt(p^4 + 2 c p^2) - c^2/(2 p^2)]` with its continuum integral.
pub fn sum_vs_integral_check(a0: f64, r_scale: f64) -> Result<SumVsIntegral> {
    require(a0 >= 0.0 && a0.is_finite(), || format!("a0 must be nonnegative, got {a0}"))?;
    require(r_scale >= 1.0, || format!("R must be >= 1, got {r_scale}"))?;
    let h = 2.0 * PI / r_scale.sqrt();
    let c = 8.0 * PI * a0;
    let p_cut = 12.0 * c.sqrt().max(h);
    let kmax = ((p_cut / h).powi(2).ceil() as u64).clamp(64, 4_000_000);
    if a0 == 0.0 {
        return Ok(SumVsIntegral { sum: 0.0, integral: 0.0, integral_quadrature: 0.0, ratio: None, shells: kmax });
    }
    let table = ShellTable::new(kmax);
    let sum = r_scale * tapered_value(&table, c, h, kmax)?;
    let radial = |p: f64| p * p * bogoliubov_summand(c, p * p);
    let opts = QuadOptions::tol(1e-300, 1e-12);
    let sound = c.sqrt();
    let full = integrate(radial, 0.0, sound, opts)?.value + integrate_to_infinity(radial, sound, opts)?.value;
    let integral_quadrature = r_scale * 4.0 * PI * full / h.powi(3);
    let integral = 4.0 * PI * a0 * lhy_coefficient() * a0.powf(1.5) * r_scale.powf(2.5);
    Ok(SumVsIntegral { sum, integral, integral_quadrature, ratio: Some(sum / integral), shells: kmax })
}
