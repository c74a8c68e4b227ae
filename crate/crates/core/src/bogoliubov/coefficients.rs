//! The coefficients `F_p`, `G_p` of the quadratic excitation Hamiltonian after
//! conjugation by `T(eta_H)`, and the angles `tau_p` that diagonalise it.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{require, Error, Result};
use crate::potential::RadialPotential;
use crate::scattering::{solve_neumann, solve_zero_energy};

/// Distance of the `atanh` argument from `+-1` below which it is clamped.
const ATANH_CLAMP: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientRow {
    pub p: f64,
    pub eta: f64,
    pub gamma: f64,
    pub sigma: f64,
    pub conv: f64,
    pub f: f64,
    pub g: f64,
    pub tau: f64,
    /// `sqrt(F^2 - G^2)`.
    pub omega: f64,
    /// `sqrt(p^4 + 16 pi a0 p^2)`.
    pub dispersion: f64,
}

impl CoefficientRow {
    /// `(-F + sqrt(F^2 - G^2))/2`.
    pub fn diagonal_shift(&self) -> f64 {
        0.5 * (self.omega - self.f)
    }

    /// The same shift from the rotation angle: `(F cosh 2 tau + G sinh 2 tau - F)/2`.
    pub fn diagonal_shift_from_tau(&self) -> f64 {
        let t = 2.0 * self.tau;
        0.5 * (self.f * t.cosh() + self.g * t.sinh() - self.f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BogoliubovCoefficients {
    pub n: f64,
    pub mu: f64,
    pub a0: f64,
    pub lambda_n: f64,
    pub rows: Vec<CoefficientRow>,
}

impl BogoliubovCoefficients {
    pub fn total_diagonal_shift(&self) -> f64 {
        self.rows.iter().map(CoefficientRow::diagonal_shift).sum()
    }
}

/// `gamma, sigma, F, G, tau` and `sqrt(F^2 - G^2)` at one momentum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticForm {
    pub gamma: f64,
    pub sigma: f64,
    pub f: f64,
    pub g: f64,
    pub tau: f64,
    pub omega: f64,
}

/// `F = p^2 (gamma^2 + sigma^2) + conv (gamma + sigma)^2`,
/// `G = 2 p^2 gamma sigma + conv (gamma + sigma)^2`, `tanh(2 tau) = -G/F`.
pub fn quadratic_form(p: f64, eta: f64, conv: f64) -> Result<QuadraticForm> {
    let (gamma, sigma) = (eta.cosh(), eta.sinh());
    let p2 = p * p;
    let s = (gamma + sigma).powi(2);
    let f = p2 * (gamma * gamma + sigma * sigma) + conv * s;
    let g = 2.0 * p2 * gamma * sigma + conv * s;
    if !(f > 0.0 && g.abs() < f) {
        return Err(Error::CoefficientViolation { p, f, g });
    }
    let ratio = (-g / f).clamp(-1.0 + ATANH_CLAMP, 1.0 - ATANH_CLAMP);
    let tau = 0.5 * ratio.atanh();
    let omega = ((f - g) * (f + g)).sqrt();
    Ok(QuadraticForm { gamma, sigma, f, g, tau, omega })
}

/// Build the table at the momenta `p_set` (magnitudes).
pub fn renormalized_coefficients(pot: &RadialPotential, n: f64, mu: f64, p_set: &[f64]) -> Result<BogoliubovCoefficients> {
    require(mu > 0.0, || format!("mu must be positive, got {mu}"))?;
    require(p_set.iter().all(|p| *p > 0.0), || "momenta must be nonzero".into())?;
    let sol = solve_neumann(pot, n)?;
    let a0 = solve_zero_energy(pot)?.a0;
    let rows = p_set
        .par_iter()
        .map(|&p| {
            let eta = if p >= mu { sol.eta(p)? } else { 0.0 };
            let conv = sol.conv(p)?;
            let q = quadratic_form(p, eta, conv)?;
            Ok(CoefficientRow {
                p,
                eta,
                gamma: q.gamma,
                sigma: q.sigma,
                conv,
                f: q.f,
                g: q.g,
                tau: q.tau,
                omega: q.omega,
                dispersion: super::dispersion(a0, p)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BogoliubovCoefficients { n, mu, a0, lambda_n: sol.lambda, rows })
}
