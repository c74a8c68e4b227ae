//! Zero-energy scattering, Born approximations, and the Neumann problem on the
//! ball of radius 1/2 that defines the correlation kernel `eta_p`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{require, Error, Result};
use crate::ode::{solve_linear, OdeOptions, RadialProfile};
use crate::potential::{sinc, RadialInteraction, RadialPotential};
use crate::quadrature::{integrate, integrate_pieces, QuadOptions};

/// Starting radius of the ODE, relative to the support radius.
const START_FRACTION: f64 = 1e-8;

/// `eta_p = ETA_SIGN * N^ETA_N_POWER * w^(p/N)`, with `w = 1 - f_N` written in
/// rescaled coordinates `y = N x` (support radius `N/2`).
pub const ETA_N_POWER: i32 = -2;
/// Sign of the kernel; negative so that `T(eta)` lowers the vacuum energy.
pub const ETA_SIGN: f64 = -1.0;

#[derive(Debug, Clone)]
pub struct ScatteringSolution {
    pub a0: f64,
    /// `|a0 - a0'|` where `a0'` comes from a solve at 100x tighter tolerance.
    pub residual: f64,
    range: f64,
    /// `u(r) = r f(r)` on `[r_start, R]`, normalised so that `u = r - a0` outside.
    profile: Option<RadialProfile>,
    norm: f64,
}

fn shoot_zero_energy(pot: &dyn RadialInteraction, opts: OdeOptions) -> Result<(RadialProfile, f64, f64)> {
    let range = pot.range();
    let mut bp = pot.breakpoints();
    bp[0] = START_FRACTION * range;
    let prof = solve_linear(|r| 0.5 * pot.value(r), &bp, bp[0], 1.0, opts)?;
    let (u, du) = prof.end_values();
    Ok((prof, range - u / du, du))
}

fn is_zero(pot: &dyn RadialInteraction) -> Result<bool> {
    Ok(pot.fourier_transform(0.0)? == 0.0)
}

/// Solve `u'' = V u / 2`, `u(0) = 0`, and match to `u = A (r - a0)` at `r = R`.
pub fn solve_zero_energy(pot: &dyn RadialInteraction) -> Result<ScatteringSolution> {
    if is_zero(pot)? {
        return Ok(ScatteringSolution { a0: 0.0, residual: 0.0, range: pot.range(), profile: None, norm: 1.0 });
    }
    let opts = OdeOptions::default();
    let (profile, a0, du) = shoot_zero_energy(pot, opts)?;
    let (_, a0_fine, _) = shoot_zero_energy(pot, OdeOptions { rtol: opts.rtol * 1e-2, ..opts })?;
    if a0 < 0.0 {
        return Err(Error::Internal(format!("negative scattering length {a0} for a nonnegative potential")));
    }
    Ok(ScatteringSolution { a0, residual: (a0 - a0_fine).abs(), range: pot.range(), profile: Some(profile), norm: du })
}

impl ScatteringSolution {
    pub fn range(&self) -> f64 {
        self.range
    }

    /// `f(r)`, equal to `1 - a0/r` beyond the support.
    pub fn f(&self, r: f64) -> f64 {
        match &self.profile {
            None => 1.0,
            Some(p) if r < self.range => {
                let r = r.max(p.start());
                p.eval(r).0 / (r * self.norm)
            }
            Some(_) => 1.0 - self.a0 / r,
        }
    }

    /// Samples `(r, f(r))` on a uniform grid over `[0, r_out]`.
    pub fn f_profile(&self, r_out: f64, points: usize) -> Vec<(f64, f64)> {
        (0..points)
            .map(|i| {
                let r = r_out * i as f64 / (points.max(2) - 1) as f64;
                (r, self.f(r))
            })
            .collect()
    }

    /// `(8 pi)^-1 int V f`, which must reproduce `a0`.
    pub fn integral_identity(&self, pot: &dyn RadialInteraction) -> Result<f64> {
        if self.profile.is_none() {
            return Ok(0.0);
        }
        let q = integrate_pieces(|r| r * r * pot.value(r) * self.f(r), &pot.breakpoints(), QuadOptions::tol(1e-14, 1e-13))?;
        Ok(q.value / 2.0)
    }
}

/// First (and optionally second) Born approximation of the scattering length.
pub fn born_series(pot: &dyn RadialInteraction, order: usize) -> Result<Vec<f64>> {
    require(order <= 1, || format!("Born order must be 0 or 1, got {order}"))?;
    let a_first = pot.fourier_transform(0.0)? / (8.0 * PI);
    if order == 0 {
        return Ok(vec![a_first]);
    }
    if a_first == 0.0 {
        return Ok(vec![0.0, 0.0]);
    }
    Ok(vec![a_first, second_born(pot)?])
}

/// `-(8 pi)^-1 int d^3p/(2 pi)^3 V^(p)^2 / (2 p^2) = -(32 pi^3)^-1 int_0^inf V^(p)^2 dp`.
fn second_born(pot: &dyn RadialInteraction) -> Result<f64> {
    let range = pot.range();
    let period = PI / range;
    let panels = 400usize;
    let opts = QuadOptions::tol(1e-16, 1e-13);
    let sq = |p: f64| pot.fourier_transform(p).map(|v| v * v).unwrap_or(f64::NAN);
    let mut total = 0.0;
    let mut last_half = 0.0;
    for i in 0..panels {
        let (a, b) = (i as f64 * period, (i + 1) as f64 * period);
        let q = integrate(sq, a, b, opts)?.value;
        total += q;
        if i >= panels / 2 {
            last_half += q;
        }
    }
    // Fit the tail to c / p^4 using the mean over the second half of the range.
    let (p_mid, p_max) = (panels as f64 / 2.0 * period, panels as f64 * period);
    let c = last_half / ((p_mid.powi(-3) - p_max.powi(-3)) / 3.0);
    total += c / (3.0 * p_max.powi(3));
    Ok(-total / (32.0 * PI.powi(3)))
}

/// Lowest Neumann eigenfunction of `-Laplace + N^2 V(N x)/2` on `|x| <= 1/2`.
#[derive(Debug, Clone)]
pub struct NeumannSolution {
    pub n: f64,
    pub lambda: f64,
    /// `R / N`, the support radius of the rescaled potential.
    pub inner_range: f64,
    pot: RadialPotential,
    profile: Option<RadialProfile>,
    /// Multiplier making `f_N(1/2) = 1`.
    scale: f64,
}

fn shoot_neumann(pot: &RadialPotential, n: f64, lambda: f64) -> Result<RadialProfile> {
    let inner = pot.range() / n;
    let mut bp: Vec<f64> = pot.breakpoints().iter().map(|r| r / n).collect();
    bp[0] = START_FRACTION * inner;
    bp.push(0.5);
    let n2 = n * n;
    solve_linear(|r| 0.5 * n2 * pot.value(n * r) - lambda, &bp, bp[0], 1.0, OdeOptions::default())
}

fn neumann_mismatch(p: &RadialProfile) -> f64 {
    let (u, du) = p.end_values();
    (0.5 * du - u) / u.abs().max(du.abs())
}

/// Solve the Neumann problem by bisection on `u'(1/2)/2 - u(1/2)` over `(0, (2 pi)^2)`.
pub fn solve_neumann(pot: &RadialPotential, n: f64) -> Result<NeumannSolution> {
    let inner = pot.range() / n;
    require(n >= 1.0 && inner < 0.5, || format!("need R/N < 1/2, got R/N = {inner}"))?;
    if pot.is_zero() {
        return Ok(NeumannSolution { n, lambda: 0.0, inner_range: inner, pot: pot.clone(), profile: None, scale: 1.0 });
    }
    let lambda_max = (2.0 * PI).powi(2);
    let (mut lo, mut hi) = (0.0, lambda_max);
    let g_lo = neumann_mismatch(&shoot_neumann(pot, n, lo)?);
    let g_hi = neumann_mismatch(&shoot_neumann(pot, n, hi)?);
    if !(g_lo > 0.0 && g_hi < 0.0) {
        return Err(Error::BracketExhausted { lambda_max });
    }
    while hi - lo > 1e-12 * hi.max(1e-300) && hi - lo > 1e-300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if neumann_mismatch(&shoot_neumann(pot, n, mid)?) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda = 0.5 * (lo + hi);
    let profile = shoot_neumann(pot, n, lambda)?;
    let scale = 0.5 / profile.end_values().0;
    Ok(NeumannSolution { n, lambda, inner_range: inner, pot: pot.clone(), profile: Some(profile), scale })
}

impl NeumannSolution {
    /// `f_N(r)` for `0 <= r <= 1/2`, and 1 beyond.
    pub fn f(&self, r: f64) -> f64 {
        match &self.profile {
            None => 1.0,
            Some(_) if r >= 0.5 => 1.0,
            Some(p) => {
                let r = r.max(p.start());
                self.scale * p.eval(r).0 / r
            }
        }
    }

    /// `(f_N(1/2), f_N'(1/2))`.
    pub fn boundary_values(&self) -> (f64, f64) {
        match &self.profile {
            None => (1.0, 0.0),
            Some(p) => {
                let (u, du) = p.end_values();
                let (u, du) = (self.scale * u, self.scale * du);
                (2.0 * u, (du - 2.0 * u) * 2.0)
            }
        }
    }

    fn radial_transform<F: Fn(f64) -> f64>(&self, g: F, k: f64, lo: f64, hi: f64) -> Result<f64> {
        let mut bp: Vec<f64> = self.pot.breakpoints().iter().map(|r| r / self.n).filter(|r| *r > lo && *r < hi).collect();
        bp.insert(0, lo);
        bp.push(hi);
        let mut pts = vec![bp[0]];
        for w in bp.windows(2) {
            let pieces = ((k * (w[1] - w[0]) / PI).ceil() as usize).max(1);
            for j in 1..=pieces {
                pts.push(w[0] + (w[1] - w[0]) * j as f64 / pieces as f64);
            }
        }
        let q = integrate_pieces(|r| r * r * g(r) * sinc(k * r), &pts, QuadOptions::tol(1e-15, 1e-12))?;
        Ok(4.0 * PI * q.value)
    }

    /// Box Fourier transform of `w = 1 - f_N` (supported in the ball) at `|k|`.
    pub fn w_hat_box(&self, k: f64) -> Result<f64> {
        if self.profile.is_none() {
            return Ok(0.0);
        }
        self.radial_transform(|r| 1.0 - self.f(r), k, 0.0, 0.5)
    }

    /// `eta_p`, a function of `|p|` only.
    pub fn eta(&self, p: f64) -> Result<f64> {
        let n = self.n;
        // Transform in rescaled coordinates: w^_resc(k) = N^3 w^_box(N k).
        let w_resc = n.powi(3) * self.w_hat_box(p)?;
        Ok(ETA_SIGN * n.powi(ETA_N_POWER) * w_resc)
    }

    /// `int N^3 V(N x) f_N(x) e^{-i p x} dx`, the convolution entering `F_p` and `G_p`.
    pub fn conv(&self, p: f64) -> Result<f64> {
        let n = self.n;
        let n3 = n.powi(3);
        self.radial_transform(|r| n3 * self.pot.value(n * r) * self.f(r), p, 0.0, self.inner_range)
    }

    pub fn potential(&self) -> &RadialPotential {
        &self.pot
    }
}

pub fn eta_kernel(sol: &NeumannSolution, p: f64) -> Result<f64> {
    require(p > 0.0, || format!("eta is defined for |p| > 0, got {p}"))?;
    sol.eta(p)
}

/// `eta_H` on the lattice `2 pi Z^3 \ {0}` up to `|p| <= p_grid_max`, as
/// `(|n|^2, eta_H)` pairs for each occupied shell.
#[derive(Debug, Clone, Serialize)]
pub struct EtaTable {
    pub mu: f64,
    pub shells: Vec<(u64, f64)>,
    pub multiplicity: Vec<u64>,
}

impl EtaTable {
    /// `||eta_H||_2` over the tabulated lattice points.
    pub fn l2_norm(&self) -> f64 {
        self.shells.iter().zip(&self.multiplicity).map(|((_, e), m)| *m as f64 * e * e).sum::<f64>().sqrt()
    }

    pub fn momentum(k: u64) -> f64 {
        2.0 * PI * (k as f64).sqrt()
    }
}

pub fn eta_highpass(sol: &NeumannSolution, mu: f64, p_grid_max: f64) -> Result<EtaTable> {
    use rayon::prelude::*;
    require(mu > 0.0, || format!("mu must be positive, got {mu}"))?;
    let kmax = (p_grid_max / (2.0 * PI)).powi(2).floor() as u64;
    let table = crate::lattice::ShellTable::new(kmax);
    let occupied: Vec<(u64, u64)> = table.occupied().filter(|(k, _)| *k > 0).collect();
    let values: Vec<Result<f64>> = occupied
        .par_iter()
        .map(|(k, _)| {
            let p = EtaTable::momentum(*k);
            if p >= mu {
                sol.eta(p)
            } else {
                Ok(0.0)
            }
        })
        .collect();
    let mut shells = Vec::with_capacity(occupied.len());
    for ((k, _), v) in occupied.iter().zip(values) {
        shells.push((*k, v?));
    }
    Ok(EtaTable { mu, shells, multiplicity: occupied.iter().map(|(_, m)| *m).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_well_closed_form() {
        let v = RadialPotential::square_well(2.0, 1.0).unwrap();
        let s = solve_zero_energy(&v).unwrap();
        let exact = 1.0 - 1f64.tanh();
        assert!((s.a0 / exact - 1.0).abs() < 1e-9, "{}", s.a0);
        assert!(s.residual < 1e-9);
        assert!((s.f(2.0) - (1.0 - exact / 2.0)).abs() < 1e-12);
    }

    #[test]
    fn zero_potential() {
        let s = solve_zero_energy(&RadialPotential::zero()).unwrap();
        assert_eq!(s.a0, 0.0);
        assert_eq!(s.f(0.3), 1.0);
        assert_eq!(born_series(&RadialPotential::zero(), 1).unwrap(), vec![0.0, 0.0]);
        let n = solve_neumann(&RadialPotential::zero(), 10.0).unwrap();
        assert_eq!(n.lambda, 0.0);
        assert_eq!(n.eta(2.0 * PI).unwrap(), 0.0);
    }

    #[test]
    fn second_born_square_well() {
        let v = RadialPotential::square_well(0.3, 1.2).unwrap();
        let b = born_series(&v, 1).unwrap();
        assert!((b[0] - 0.3 * 1.2f64.powi(3) / 6.0).abs() < 1e-15);
        let exact = -0.09 * 1.2f64.powi(5) / 30.0;
        assert!((b[1] / exact - 1.0).abs() < 1e-9, "{} vs {exact}", b[1]);
    }

    #[test]
    fn neumann_boundary() {
        let v = RadialPotential::square_well(2.0, 1.0).unwrap();
        let s = solve_neumann(&v, 20.0).unwrap();
        let (f, df) = s.boundary_values();
        assert!((f - 1.0).abs() < 1e-12);
        assert!(df.abs() < 1e-9, "{df}");
        assert!(s.lambda > 0.0);
    }
}
