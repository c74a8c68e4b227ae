//! Thermodynamic-limit formulas and the two-line Bogoliubov energy.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{require, Error, Result};
use crate::lattice::ShellTable;
use crate::potential::RadialInteraction;
use crate::quadrature::{integrate, integrate_to_infinity, QuadOptions};

/// The interaction entering a formula: a potential's Fourier transform, or a
/// constant standing for `8 pi a0` (the renormalised coupling).
#[derive(Clone, Copy)]
pub enum Kernel<'a> {
    Potential(&'a dyn RadialInteraction),
    Constant(f64),
}

impl Kernel<'_> {
    pub fn at(&self, p: f64) -> Result<f64> {
        match self {
            Kernel::Potential(v) => v.fourier_transform(p),
            Kernel::Constant(c) => Ok(*c),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LhyEnergy {
    pub value: f64,
    pub diluteness: f64,
    /// Set when `rho a0^3 >= 1e-2`, where the expansion is not meaningful.
    pub dilute_warning: bool,
}

/// `4 pi rho a0 [1 + (128/(15 sqrt pi)) sqrt(rho a0^3)]`.
pub fn lhy_energy_per_particle(rho: f64, a0: f64) -> Result<LhyEnergy> {
    require(rho > 0.0 && a0 >= 0.0, || format!("need rho > 0 and a0 >= 0, got rho={rho}, a0={a0}"))?;
    let d = rho * a0.powi(3);
    let dilute_warning = d >= 1e-2;
    if dilute_warning {
        log::warn!("rho a0^3 = {d:.3e} is not dilute; the LHY expansion is unreliable");
    }
    let value = 4.0 * PI * rho * a0 * (1.0 + crate::lattice::lhy_coefficient() * d.sqrt());
    Ok(LhyEnergy { value, diluteness: d, dilute_warning })
}

/// `8 / (3 sqrt pi)`.
pub fn depletion_coefficient() -> f64 {
    8.0 / (3.0 * PI.sqrt())
}

/// `rho (8/(3 sqrt pi)) sqrt(rho a0^3)`.
pub fn depletion_closed_form(rho: f64, a0: f64) -> f64 {
    rho * depletion_coefficient() * (rho * a0.powi(3)).sqrt()
}

/// `p^2 [p^2 + c - s]/(2 s)` with `s = sqrt(p^4 + 2 c p^2)`, written without
/// cancellation and finite at `p = 0`.
fn depletion_radial(p: f64, c: f64) -> f64 {
    if p <= 0.0 || c == 0.0 {
        return 0.0;
    }
    let root = (p * p + 2.0 * c).sqrt();
    let s = p * root;
    p * c * c / (2.0 * root * (p * p + c + s))
}

/// `int d^3p/(2 pi)^3 [p^2 + rho V^(p) - sqrt(p^4 + 2 rho V^(p) p^2)] / (2 sqrt(...))`.
pub fn depletion_integral(rho: f64, kernel: Kernel) -> Result<f64> {
    require(rho >= 0.0, || format!("rho must be nonnegative, got {rho}"))?;
    let c0 = rho * kernel.at(0.0)?;
    if rho == 0.0 || c0 == 0.0 {
        return Ok(0.0);
    }
    let failure = std::cell::Cell::new(None);
    let radial = |p: f64| match kernel.at(p) {
        Ok(v) if rho * v >= 0.0 => depletion_radial(p, rho * v),
        Ok(v) => {
            failure.set(Some(Error::Precondition(format!("rho V^(p) = {} < 0 at p = {p}", rho * v))));
            0.0
        }
        Err(e) => {
            failure.set(Some(e));
            0.0
        }
    };
    // Split at the sound scale sqrt(2 rho V^(0)).
    let sound = (2.0 * c0).sqrt();
    let opts = QuadOptions::tol(1e-300, 1e-12);
    let value = integrate(radial, 0.0, sound, opts)?.value + integrate_to_infinity(radial, sound, opts)?.value;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(value / (2.0 * PI * PI))
}

/// Where the sums of the Bogoliubov energy run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnergyGrid {
    /// `p in (2 pi / L) Z^3 \ {0}` for a box of side `L`, shells `|n|^2 <= kmax`.
    Lattice { side: f64, kmax: u64 },
    /// Sums replaced by `L^3 int d^3p/(2 pi)^3`; results are per particle.
    Continuum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanFieldEnergy {
    /// `(N/2) rho V^(0) - 1/4 sum (rho V^(p))^2 / p^2`.
    pub first_line: f64,
    /// `-1/2 sum [p^2 + rho V^ - sqrt(p^4 + 2 rho V^ p^2) - (rho V^)^2/(2 p^2)]`.
    pub second_line: f64,
    pub total: f64,
    /// True if these are energies per particle (continuum grid).
    pub per_particle: bool,
}

/// `-[p^2 + c - sqrt(p^4 + 2 c p^2) - c^2/(2 p^2)]`, valid for either sign of `c`.
fn bracket_negated(p2: f64, c: f64) -> Result<f64> {
    let arg = p2 * p2 + 2.0 * c * p2;
    if arg < 0.0 {
        return Err(Error::Precondition(format!("p^4 + 2 rho V^ p^2 < 0 at |p| = {}", p2.sqrt())));
    }
    let s = arg.sqrt();
    // p^2 + c - s = c^2/(p^2 + c + s) when p^2 + c + s > 0.
    Ok(c * c / (2.0 * p2) - c * c / (p2 + c + s))
}

/// The Bogoliubov ground-state energy written as the two lines
/// `(N/2) rho V^(0) - 1/4 sum (rho V^)^2/p^2` and
/// `-1/2 sum [p^2 + rho V^ - sqrt(p^4 + 2 rho V^ p^2) - (rho V^)^2/(2 p^2)]`.
///
/// In continuum mode with a constant kernel `8 pi a0`, the first line stands for
/// its renormalised value `4 pi rho a0` per particle.
pub fn bogoliubov_energy_mf(rho: f64, kernel: Kernel, grid: EnergyGrid) -> Result<MeanFieldEnergy> {
    require(rho > 0.0, || format!("rho must be positive, got {rho}"))?;
    match grid {
        EnergyGrid::Lattice { side, kmax } => {
            let Kernel::Potential(pot) = kernel else {
                return Err(Error::Precondition("a constant kernel makes the lattice sums diverge; use the continuum grid".into()));
            };
            require(side > 0.0, || format!("box side must be positive, got {side}"))?;
            let n = rho * side.powi(3);
            let h = 2.0 * PI / side;
            let table = ShellTable::new(kmax);
            let mut born = 0.0;
            let mut second = 0.0;
            let mut warned = false;
            for (k, mult) in table.occupied().filter(|(k, _)| *k > 0) {
                let p = h * (k as f64).sqrt();
                let v = pot.fourier_transform(p)?;
                if v < 0.0 && !warned {
                    log::warn!("V^(p) < 0 at |p| = {p}; the Bogoliubov energy assumes a nonnegative kernel");
                    warned = true;
                }
                let c = rho * v;
                born += mult as f64 * c * c / (p * p);
                second += mult as f64 * bracket_negated(p * p, c)?;
            }
            let first_line = 0.5 * n * rho * pot.fourier_transform(0.0)? - 0.25 * born;
            let second_line = 0.5 * second;
            Ok(MeanFieldEnergy { first_line, second_line, total: first_line + second_line, per_particle: false })
        }
        EnergyGrid::Continuum => {
            let first_line = match kernel {
                Kernel::Constant(c) => 0.5 * rho * c,
                Kernel::Potential(pot) => {
                    let opts = QuadOptions::tol(1e-300, 1e-11);
                    let sq = |p: f64| pot.fourier_transform(p).map(|v| v * v).unwrap_or(f64::NAN);
                    let r = pot.range();
                    let mut born = 0.0;
                    for i in 0..400 {
                        born += integrate(sq, i as f64 * PI / r, (i + 1) as f64 * PI / r, opts)?.value;
                    }
                    0.5 * rho * pot.fourier_transform(0.0)? - rho * born / (8.0 * PI * PI)
                }
            };
            let c0 = rho * kernel.at(0.0)?;
            let failure = std::cell::Cell::new(None);
            let radial = |p: f64| {
                let v = kernel.at(p).and_then(|v| bracket_negated(p * p, rho * v));
                match v {
                    Ok(x) => p * p * x,
                    Err(e) => {
                        failure.set(Some(e));
                        0.0
                    }
                }
            };
            let sound = (2.0 * c0.abs()).sqrt().max(1e-12);
            let opts = QuadOptions::tol(1e-300, 1e-12);
            let integral = integrate(radial, 0.0, sound, opts)?.value + integrate_to_infinity(radial, sound, opts)?.value;
            if let Some(e) = failure.take() {
                return Err(e);
            }
            let second_line = integral / (2.0 * PI * PI) / (2.0 * rho);
            Ok(MeanFieldEnergy { first_line, second_line, total: first_line + second_line, per_particle: true })
        }
    }
}
