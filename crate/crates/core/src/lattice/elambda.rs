//! The constant `e_Lambda = 2 - lim_M sum_{n in Z^3, 0 < max|n_i| <= M} cos|n| / |n|^2`.
//!
//! The sum converges only conditionally and its value depends on the cube
//! ordering, so partial sums are always accumulated cube by cube.

use std::sync::OnceLock;

use serde::Serialize;

use super::{LatticeSumResult, ShellTable};
use crate::error::{require, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SumMethod {
    Raw,
    Averaged,
    Abel,
    Shells,
}

/// Power of the `sin^p` window used to average cube partial sums.
const WINDOW_POWER: i32 = 4;
/// Number of trailing averaged values whose spread gives the error estimate.
const SPREAD_COUNT: u64 = 5;

fn neumaier(acc: &mut (f64, f64), x: f64) {
    let t = acc.0 + x;
    if acc.0.abs() >= x.abs() {
        acc.1 += (acc.0 - t) + x;
    } else {
        acc.1 += (x - t) + acc.0;
    }
    acc.0 = t;
}

/// Cube partial sums `S(m)` for `m = 0..=m_max` (with `S(0) = 0`).
pub fn cube_partial_sums(m_max: u64) -> Vec<f64> {
    let mut sums = vec![0.0; m_max as usize + 1];
    let mut total = (0.0, 0.0);
    for c in 1..=m_max as i64 {
        // Boundary of the level-c cube: sorted triples 0 <= a <= b <= c with
        // the multiplicity of their signed permutations.
        let mut shell = (0.0, 0.0);
        for b in 0..=c {
            for a in 0..=b {
                let signs = [a, b, c].iter().filter(|x| **x != 0).count() as u32;
                let perms = match (a == b, b == c) {
                    (true, true) => 1,
                    (false, false) => 6,
                    _ => 3,
                };
                let k = (a * a + b * b + c * c) as f64;
                neumaier(&mut shell, (perms << signs) as f64 * k.sqrt().cos() / k);
            }
        }
        neumaier(&mut total, shell.0 + shell.1);
        sums[c as usize] = total.0 + total.1;
    }
    sums
}

/// Weighted mean of `S(m)` over `m in [ceil(M/2), M]` with `sin^p` weights
/// vanishing just outside the window.
fn windowed(sums: &[f64], m: u64) -> f64 {
    let lo = m.div_ceil(2);
    let width = (m - lo + 2) as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for j in lo..=m {
        let t = (j - lo + 1) as f64 / width;
        let w = (std::f64::consts::PI * t).sin().powi(WINDOW_POWER);
        num += w * sums[j as usize];
        den += w;
    }
    num / den
}

/// `e_Lambda` from cube partial sums up to level `m_max`.
///
/// `Raw` returns the last partial sum; `Averaged` smooths the oscillating tail
/// of the partial sums with a window over the upper half of the levels and
/// uses the spread of the last five averaged values as the error estimate.
pub fn e_lambda(m_max: u64, method: SumMethod) -> Result<LatticeSumResult> {
    let least = if method == SumMethod::Raw { 1 } else { 2 };
    require(m_max >= least, || format!("M_max must be >= {least} for the {method:?} method, got {m_max}"))?;
    let sums = cube_partial_sums(m_max);
    match method {
        SumMethod::Raw => {
            let s = sums[m_max as usize];
            let step = (s - sums[m_max as usize - 1]).abs();
            if step > 1e-3 {
                log::warn!("raw cube partial sums are not Cauchy at M = {m_max} (last step {step:.3e}); the series converges only conditionally");
            }
            Ok(LatticeSumResult { value: 2.0 - s, truncation: m_max, error_estimate: step, method })
        }
        SumMethod::Averaged => {
            let first = m_max.saturating_sub(SPREAD_COUNT - 1).max(2);
            let avgs: Vec<f64> = (first..=m_max).map(|m| windowed(&sums, m)).collect();
            let hi = avgs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let lo = avgs.iter().cloned().fold(f64::INFINITY, f64::min);
            let value = 2.0 - avgs[avgs.len() - 1];
            Ok(LatticeSumResult { value, truncation: m_max, error_estimate: hi - lo, method })
        }
        other => Err(crate::error::Error::Precondition(format!("e_lambda supports raw or averaged, got {other:?}"))),
    }
}

/// Neville extrapolation of `(x_i, y_i)` to `x = 0`.
fn extrapolate_to_zero(x: &[f64], y: &[f64]) -> f64 {
    let mut p = y.to_vec();
    let n = x.len();
    for level in 1..n {
        for i in 0..n - level {
            p[i] = (x[i + level] * p[i] - x[i] * p[i + 1]) / (x[i + level] - x[i]);
        }
    }
    p[0]
}

/// `e_Lambda` by Abel damping: `S(eps) = sum cos|n| e^{-eps |n|} / |n|^2` summed
/// over shells, minus its continuum part `4 pi eps / (1 + eps^2)`, then
/// extrapolated polynomially to `eps = 0`.
pub fn e_lambda_abel(eps: &[f64]) -> Result<LatticeSumResult> {
    require(eps.len() >= 2, || "need at least two damping values".into())?;
    require(eps.iter().all(|e| *e > 0.0 && *e < 1.0), || "damping values must lie in (0, 1)".into())?;
    let eps_min = eps.iter().cloned().fold(f64::INFINITY, f64::min);
    // Terms are below ~1e-15 of the total once eps |n| exceeds 36.
    let kmax = (36.0 / eps_min).powi(2).ceil() as u64;
    let table = ShellTable::new(kmax);
    let values: Vec<f64> = eps
        .iter()
        .map(|&e| {
            let s = table.sum(kmax, |k| {
                let q = (k as f64).sqrt();
                q.cos() * (-e * q).exp() / k as f64
            });
            s - 4.0 * std::f64::consts::PI * e / (1.0 + e * e)
        })
        .collect();
    let full = extrapolate_to_zero(eps, &values);
    let reduced = extrapolate_to_zero(&eps[..eps.len() - 1], &values[..values.len() - 1]);
    Ok(LatticeSumResult { value: 2.0 - full, truncation: kmax, error_estimate: (full - reduced).abs(), method: SumMethod::Abel })
}

/// Reference value used by the energy formulas: the averaged estimate at `M = 120`.
pub fn e_lambda_default() -> LatticeSumResult {
    static CACHE: OnceLock<LatticeSumResult> = OnceLock::new();
    *CACHE.get_or_init(|| e_lambda(120, SumMethod::Averaged).expect("valid level"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_cube() {
        let s = cube_partial_sums(1);
        let expect = 6.0 * 1f64.cos() + 6.0 * 2f64.sqrt().cos() + 8.0 / 3.0 * 3f64.sqrt().cos();
        assert!((s[1] - expect).abs() < 1e-15);
        let r = e_lambda(2, SumMethod::Raw).unwrap();
        assert!((r.value - (2.0 - cube_partial_sums(2)[2])).abs() < 1e-15);
    }

    #[test]
    fn brute_force_cube() {
        let m = 6;
        let direct: f64 = super::super::cube_points(m)
            .iter()
            .map(|p| {
                let k = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) as f64;
                k.sqrt().cos() / k
            })
            .sum();
        assert!((cube_partial_sums(m as u64)[m as usize] - direct).abs() < 1e-12);
    }

    #[test]
    fn extrapolation_is_exact_for_polynomials() {
        let x = [0.4, 0.2, 0.1];
        let y: Vec<f64> = x.iter().map(|t| 3.0 - 2.0 * t + 5.0 * t * t).collect();
        assert!((extrapolate_to_zero(&x, &y) - 3.0).abs() < 1e-13);
    }
}
