//! Born series for the scattering length of `N^2 V(N x)` on the unit torus.
//!
//! Two evaluations are provided. `Cube(M)` applies the momentum-space kernel
//! `V^((p - q)/N)/q^2` to a vector over the truncated lattice `|p_i| <= 2 pi M`,
//! exactly as the series is written. `Full` sums over the whole lattice by
//! working in position space: the torus Green's function is
//! `1/(4 pi |x|) + xi + |x|^2/6 + (harmonic terms of degree >= 4)`, and for radial
//! densities supported well inside the box the harmonic terms drop out of
//! every term of the series up to relative order `N^-8`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::{cube_points, periodic_green_constant};
use crate::error::{require, Result};
use crate::potential::{RadialInteraction, RadialPotential};
use crate::radial::RadialGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Truncation {
    /// Momenta with `|p_i| <= 2 pi M` in every component.
    Cube(u64),
    /// The whole lattice, summed in position space.
    Full,
}

/// Enumeration order of the truncated lattice (the result must not depend on it).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointOrder {
    Lexicographic,
    Reversed,
    /// `i -> (i * stride) mod n`; `stride` must be coprime to the point count.
    Strided(u64),
}

#[derive(Debug, Clone, Copy)]
pub struct FiniteVolumeOptions {
    pub truncation: Truncation,
    pub order: PointOrder,
}

impl Default for FiniteVolumeOptions {
    fn default() -> Self {
        Self { truncation: Truncation::Full, order: PointOrder::Lexicographic }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteVolumeResult {
    pub a_lambda: f64,
    /// Terms of the series for `8 pi a_Lambda`, starting with `V^(0)`.
    pub terms: Vec<f64>,
    /// False if some term did not shrink relative to the previous one.
    pub converging: bool,
}

fn finish(terms: Vec<f64>) -> FiniteVolumeResult {
    let converging = terms.windows(2).skip(1).all(|w| w[1].abs() < w[0].abs() || w[1] == 0.0);
    if !converging {
        log::warn!("Born series terms are not decreasing; the potential may be too strong for the series");
    }
    let a_lambda = terms.iter().sum::<f64>() / (8.0 * PI);
    FiniteVolumeResult { a_lambda, terms, converging }
}

fn radial_grid(pot: &dyn RadialInteraction) -> RadialGrid {
    RadialGrid::new(&pot.breakpoints(), 4, 24)
}

/// Position-space Born terms with torus corrections weighted by `1/N` (`xi`)
/// and `1/N^3` (`|x|^2/6`); `inv_n = 0` gives the infinite-volume series.
fn position_space_terms(pot: &dyn RadialInteraction, inv_n: f64, xi: f64, k_max: usize) -> Vec<f64> {
    let grid = radial_grid(pot);
    let v = grid.sample(|r| pot.value(r));
    let r2: Vec<f64> = grid.nodes.iter().map(|r| r * r).collect();
    let mut chain = v.clone();
    let mut terms = vec![grid.volume_integral(&chain)];
    for k in 1..=k_max {
        let mass0 = grid.volume_integral(&chain);
        let second: Vec<f64> = chain.iter().zip(&r2).map(|(c, r)| c * r).collect();
        let mass2 = grid.volume_integral(&second);
        let phi = grid.newton_potential(&chain);
        let shift = xi * inv_n * mass0 + inv_n.powi(3) * mass2 / 6.0;
        let curv = inv_n.powi(3) * mass0 / 6.0;
        chain = (0..chain.len()).map(|i| v[i] * (phi[i] + shift + curv * r2[i])).collect();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        terms.push(sign * grid.volume_integral(&chain) / 2f64.powi(k as i32));
    }
    terms
}

/// Terms of the infinite-volume Born series for `8 pi a0`, starting with `V^(0)`.
pub fn continuum_born_terms(pot: &dyn RadialInteraction, k_max: usize) -> Vec<f64> {
    position_space_terms(pot, 0.0, 0.0, k_max)
}

fn permute(pts: Vec<[i64; 3]>, order: PointOrder) -> Result<Vec<[i64; 3]>> {
    let n = pts.len() as u64;
    match order {
        PointOrder::Lexicographic => Ok(pts),
        PointOrder::Reversed => Ok(pts.into_iter().rev().collect()),
        PointOrder::Strided(s) => {
            fn gcd(a: u64, b: u64) -> u64 {
                if b == 0 {
                    a
                } else {
                    gcd(b, a % b)
                }
            }
            require(gcd(s % n, n) == 1, || format!("stride {s} is not coprime to {n}"))?;
            Ok((0..n).map(|i| pts[((i * s) % n) as usize]).collect())
        }
    }
}

fn cube_terms(pot: &RadialPotential, n: f64, k_max: usize, m: u64, order: PointOrder) -> Result<Vec<f64>> {
    let pts = permute(cube_points(m as i64), order)?;
    let dmax = 12 * m * m;
    let kernel: Vec<f64> = (0..=dmax)
        .into_par_iter()
        .map(|d2| pot.fourier_transform(2.0 * PI * (d2 as f64).sqrt() / n))
        .collect::<Result<_>>()?;
    let sq = |p: &[i64; 3]| (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) as usize;
    let p2: Vec<f64> = pts.iter().map(|p| 4.0 * PI * PI * sq(p) as f64).collect();
    let vp: Vec<f64> = pts.iter().map(|p| kernel[sq(p)]).collect();
    let mut u: Vec<f64> = vp.iter().zip(&p2).map(|(v, q)| v / q).collect();
    let dot = |u: &[f64]| u.iter().zip(&vp).map(|(a, b)| a * b).sum::<f64>();
    let mut terms = vec![kernel[0]];
    for k in 1..=k_max {
        if k > 1 {
            u = pts
                .par_iter()
                .zip(&p2)
                .map(|(q, q2)| {
                    let mut acc = 0.0;
                    for (p, up) in pts.iter().zip(&u) {
                        let d = [q[0] - p[0], q[1] - p[1], q[2] - p[2]];
                        acc += kernel[sq(&d)] * up;
                    }
                    acc / q2
                })
                .collect();
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        terms.push(sign * dot(&u) / (2.0 * n).powi(k as i32));
    }
    Ok(terms)
}

/// `a_Lambda` from `8 pi a_Lambda = V^(0) + sum_{k=1}^{k_max} (-1)^k (2N)^-k sum_{p_1..p_k} ...`.
pub fn finite_volume_scattering_length(
    pot: &RadialPotential,
    n: f64,
    k_max: usize,
    opts: FiniteVolumeOptions,
) -> Result<FiniteVolumeResult> {
    require(k_max >= 1, || "series order must be at least 1".into())?;
    require(n >= 1.0, || format!("N must be >= 1, got {n}"))?;
    if pot.is_zero() {
        return Ok(finish(vec![0.0; k_max + 1]));
    }
    match opts.truncation {
        Truncation::Cube(m) => {
            require(m >= 1, || "cube level must be at least 1".into())?;
            Ok(finish(cube_terms(pot, n, k_max, m, opts.order)?))
        }
        Truncation::Full => {
            require(2.0 * pot.range() < n, || {
                format!("the full-lattice evaluation needs 2R/N < 1, got {}", 2.0 * pot.range() / n)
            })?;
            Ok(finish(position_space_terms(pot, 1.0 / n, periodic_green_constant(), k_max)))
        }
    }
}
