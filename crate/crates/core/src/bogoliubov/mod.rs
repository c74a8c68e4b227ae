//! Predictions of Bogoliubov theory: dispersion, excitation energies, ground
//! state energies, depletion, and the renormalised coefficients `F_p, G_p, tau_p`.

mod coefficients;
mod thermo;

pub use coefficients::{quadratic_form, renormalized_coefficients, QuadraticForm, BogoliubovCoefficients, CoefficientRow};
pub use thermo::{
    bogoliubov_energy_mf, depletion_closed_form, depletion_coefficient, depletion_integral, lhy_energy_per_particle,
    EnergyGrid, Kernel, LhyEnergy, MeanFieldEnergy,
};

use std::f64::consts::PI;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{require, Error, Result};
use crate::lattice::{bogoliubov_lattice_sum, e_lambda_default};
use crate::potential::RadialPotential;
use crate::scattering::solve_zero_energy;

/// `sqrt(|p|^4 + 16 pi a0 |p|^2)`.
pub fn dispersion(a0: f64, p: f64) -> Result<f64> {
    require(a0 >= 0.0, || format!("a0 must be nonnegative, got {a0}"))?;
    let p2 = p * p;
    Ok((p2 * (p2 + 16.0 * PI * a0)).sqrt())
}

/// `sqrt(16 pi a0)`, the slope of the dispersion at small momentum.
pub fn velocity_of_sound(a0: f64) -> f64 {
    (16.0 * PI * a0).sqrt()
}

/// Finitely many occupied momenta `p = 2 pi n`, `n` in `Z^3 \ {0}`.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct OccupationList {
    pub entries: Vec<([i64; 3], u64)>,
}

impl OccupationList {
    pub fn new(entries: Vec<([i64; 3], u64)>) -> Result<Self> {
        require(entries.iter().all(|(n, _)| *n != [0, 0, 0]), || "occupations live on nonzero momenta".into())?;
        Ok(Self { entries })
    }

    pub fn momentum(n: &[i64; 3]) -> f64 {
        2.0 * PI * ((n[0] * n[0] + n[1] * n[1] + n[2] * n[2]) as f64).sqrt()
    }

    /// Concatenation of two lists (occupations of repeated momenta add up).
    pub fn join(&self, other: &Self) -> Self {
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Self { entries }
    }
}

impl FromStr for OccupationList {
    type Err = Error;

    /// `"nx/ny/nz:count,..."`, e.g. `"1/0/0:2,0/1/1:1"` for `p = 2 pi n`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |item: &str| Error::Precondition(format!("cannot parse occupation {item:?}; expected nx/ny/nz:count"));
        let mut entries = Vec::new();
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (p, n) = item.split_once(':').ok_or_else(|| bad(item))?;
            let comps: Vec<i64> = p.split('/').map(|c| c.trim().parse()).collect::<std::result::Result<_, _>>().map_err(|_| bad(item))?;
            let count: u64 = n.trim().parse().map_err(|_| bad(item))?;
            if comps.len() != 3 {
                return Err(bad(item));
            }
            entries.push(([comps[0], comps[1], comps[2]], count));
        }
        Self::new(entries)
    }
}

/// `sum_p n_p sqrt(|p|^4 + 16 pi a0 |p|^2)`.
pub fn excitation_energy(a0: f64, occ: &OccupationList) -> Result<f64> {
    let mut total = 0.0;
    for (n, count) in &occ.entries {
        total += *count as f64 * dispersion(a0, OccupationList::momentum(n))?;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GpEnergy {
    pub a0: f64,
    pub leading: f64,
    pub e_lambda_term: f64,
    pub lattice_sum: f64,
    pub total: f64,
    pub error_estimate: f64,
}

/// `4 pi (N - 1) a0 + e_Lambda a0^2 + (Bogoliubov lattice sum)`.
pub fn ground_state_energy_gp(pot: &RadialPotential, n: f64) -> Result<GpEnergy> {
    require(n >= 2.0, || format!("N must be >= 2, got {n}"))?;
    let sol = solve_zero_energy(pot)?;
    let a0 = sol.a0;
    let e = e_lambda_default();
    let sum = bogoliubov_lattice_sum(a0)?;
    let leading = 4.0 * PI * (n - 1.0) * a0;
    let e_lambda_term = e.value * a0 * a0;
    let error_estimate = e.error_estimate * a0 * a0 + sum.error_estimate + 4.0 * PI * n * sol.residual;
    Ok(GpEnergy { a0, leading, e_lambda_term, lattice_sum: sum.value, total: leading + e_lambda_term + sum.value, error_estimate })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_occupations() {
        let o: OccupationList = "1/0/0:2, 0/1/-1:1".parse().unwrap();
        assert_eq!(o.entries, vec![([1, 0, 0], 2), ([0, 1, -1], 1)]);
        assert!("0/0/0:1".parse::<OccupationList>().is_err());
        assert!("1/0:1".parse::<OccupationList>().is_err());
        assert!("".parse::<OccupationList>().unwrap().entries.is_empty());
    }

    #[test]
    fn dispersion_limits() {
        assert_eq!(dispersion(0.3, 0.0).unwrap(), 0.0);
        let a0 = 0.3;
        assert!((dispersion(0.01, 1e3).unwrap() - 1e6 - 8.0 * PI * 0.01).abs() < 1e-6);
        assert!((dispersion(a0, 1e-6).unwrap() / 1e-6 - velocity_of_sound(a0)).abs() < 1e-9);
        assert!(dispersion(-1.0, 1.0).is_err());
    }
}
