//! The conjugation cascade `U_N`, `T(eta)`, `e^A`, `T(tau)` on a small system.

use serde::Serialize;

use super::basis::{BasisOptions, FockBasis, Space};
use super::linalg::{conjugate, expm, ground_state, restricted_norm, LanczosOptions};
use super::modes::ModeSet;
use super::ops::{
    b, b_dag, build_cubic_generator, build_hamiltonian, excitation_map, pair_generator, word_operator, CubicReport, CubicWeights,
    HamiltonianReport,
};
use super::sparse::SparseOperator;
use crate::bogoliubov::quadratic_form;
use crate::error::{require, Result};
use crate::potential::{rescale, RadialInteraction, RadialPotential, ScaledPotential};

/// `T(eta) = exp(1/2 sum eta_p (b*_p b*_{-p} - b_p b_{-p}))`.
pub fn build_generalized_bogoliubov(eta: &[f64], basis: &FockBasis) -> Result<SparseOperator> {
    let mut t = expm(&pair_generator(eta, basis)?);
    t.block_diagonal = eta.iter().all(|e| *e == 0.0);
    Ok(t)
}

/// Operator norm of `d_p = T* b_p T - cosh(eta_p) b_p - sinh(eta_p) b*_{-p}`
/// on the sectors `N_+ <= k`.
pub fn bogoliubov_residual(t: &SparseOperator, eta: &[f64], p: usize, k: usize, basis: &FockBasis) -> Result<f64> {
    require(basis.space == Space::Excitations, || "residuals live on the excitation space".into())?;
    require(p > 0 && p < basis.modes.len(), || format!("mode {p} is not a nonzero mode"))?;
    let bp = word_operator(basis, b(p));
    let bm = word_operator(basis, b_dag(basis.modes.negative(p)));
    let d = conjugate(&bp, t).combine(1.0, &bp.combine(eta[p].cosh(), &bm, eta[p].sinh()), -1.0);
    let cols: Vec<usize> = (0..basis.dim()).filter(|&i| basis.sector(i) <= k).collect();
    Ok(restricted_norm(&d, &cols))
}

/// `|<psi, W_1 W_2 ... W_k Omega>|^2` with `Omega` the excitation vacuum.
pub fn overlap_diagnostic(psi: &[f64], stages: &[&SparseOperator], basis: &FockBasis) -> Result<f64> {
    let vac = basis.condensate().ok_or_else(|| crate::error::Error::Precondition("basis has no vacuum".into()))?;
    let mut v = basis.unit(vac);
    for w in stages.iter().rev() {
        v = w.mul_vec(&v);
    }
    let norm_psi: f64 = psi.iter().map(|x| x * x).sum::<f64>();
    let o: f64 = psi.iter().zip(&v).map(|(a, b)| a * b).sum();
    Ok((o * o / norm_psi).min(1.0))
}

/// Quadratic Bogoliubov prediction on the mode set:
/// `(N-1) N W(0)/2 + 1/2 sum_{p != 0} [sqrt(p^4 + 2 p^2 c_p) - p^2 - c_p]`, `c_p = N W(p)`.
pub fn bogoliubov_prediction(pot: &ScaledPotential, modes: &ModeSet) -> Result<f64> {
    let n = pot.n;
    let mut e = 0.5 * (n - 1.0) * n * pot.fourier_transform(0.0)?;
    for i in 1..modes.len() {
        let p2 = modes.momentum_squared(i);
        let c = n * pot.fourier_transform(modes.momentum(i))?;
        let arg = p2 * p2 + 2.0 * p2 * c;
        require(arg >= 0.0, || format!("p^4 + 2 p^2 c < 0 at mode {:?}", modes.label(i)))?;
        e += 0.5 * (arg.sqrt() - p2 - c);
    }
    Ok(e)
}

#[derive(Debug, Clone)]
pub struct SimulationConfig {
    pub n: usize,
    pub modes: ModeSet,
    pub beta: f64,
    pub kappa: f64,
    pub potential: RadialPotential,
    /// `eta` is kept on `|p| >= eta_mu`.
    pub eta_mu: f64,
    /// Low-momentum cutoff of the cubic generator.
    pub nu: f64,
    pub cascade: bool,
    /// Restrict to a total-momentum sector (the ground state lives at zero).
    pub momentum: Option<[i64; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageValue {
    pub stage: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Overlaps {
    pub condensate: f64,
    pub quadratic: f64,
    pub full: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DroppedTerms {
    pub hamiltonian: usize,
    pub cubic: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub dimension: usize,
    pub modes: usize,
    #[serde(rename = "E_exact")]
    pub e_exact: f64,
    pub ground_state_residual: f64,
    #[serde(rename = "E_bogoliubov_prediction")]
    pub e_bogoliubov_prediction: f64,
    pub vacuum_expectations: Vec<StageValue>,
    pub overlaps: Overlaps,
    pub dropped_terms: DroppedTerms,
    pub eta: Vec<f64>,
    pub tau: Option<Vec<f64>>,
}

/// Per-mode kernels: `eta_p = -N W(p)/(2 p^2)` on `|p| >= mu` (zero elsewhere)
/// and the same expression unrestricted.
pub(crate) fn kernels(pot: &ScaledPotential, modes: &ModeSet, mu: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut full = vec![0.0; modes.len()];
    for (i, slot) in full.iter_mut().enumerate().skip(1) {
        *slot = -pot.n * pot.fourier_transform(modes.momentum(i))? / (2.0 * modes.momentum_squared(i));
    }
    let high = full.iter().enumerate().map(|(i, e)| if i > 0 && modes.momentum(i) >= mu { *e } else { 0.0 }).collect();
    Ok((high, full))
}

/// Every operator of the conjugation cascade for one configuration.
pub struct Cascade {
    pub particles: FockBasis,
    pub excitations: FockBasis,
    pub hamiltonian: SparseOperator,
    pub hamiltonian_report: HamiltonianReport,
    /// `U_N`.
    pub excitation_map: SparseOperator,
    pub eta: Vec<f64>,
    /// `T(eta)`.
    pub t_eta: SparseOperator,
    /// `e^A`, `T(tau)` and the kernel `tau`, present when the cascade is requested.
    pub cubic: Option<(SparseOperator, CubicReport)>,
    pub t_tau: Option<(SparseOperator, Vec<f64>)>,
    pub scaled: ScaledPotential,
}

impl Cascade {
    pub fn new(cfg: &SimulationConfig) -> Result<Self> {
        require(cfg.eta_mu > 0.0, || "eta_mu must be positive".into())?;
        require(!cfg.cascade || (cfg.nu > 0.0 && cfg.nu < cfg.eta_mu), || format!("need 0 < nu < mu, got nu={}, mu={}", cfg.nu, cfg.eta_mu))?;
        let scaled = rescale(&cfg.potential, cfg.n as f64, cfg.beta, cfg.kappa)?;
        let opts = BasisOptions { momentum: cfg.momentum, ..Default::default() };
        let particles = FockBasis::new(cfg.n, &cfg.modes, Space::Particles, opts)?;
        let excitations = FockBasis::new(cfg.n, &cfg.modes, Space::Excitations, opts)?;
        let (hamiltonian, hamiltonian_report) = build_hamiltonian(&scaled, &particles)?;
        let excitation_map = excitation_map(&particles, &excitations)?;
        let (eta, dressing) = kernels(&scaled, &cfg.modes, cfg.eta_mu)?;
        let t_eta = build_generalized_bogoliubov(&eta, &excitations)?;
        let (mut cubic, mut t_tau) = (None, None);
        if cfg.cascade {
            let high = cfg.modes.shell_range(cfg.eta_mu, f64::INFINITY);
            let low = cfg.modes.shell_range(0.0, cfg.nu);
            let (a, report) = build_cubic_generator(&eta, &high, &low, &CubicWeights::Dressed(dressing), &excitations)?;
            cubic = Some((expm(&a), report));
            let mut tau = vec![0.0; cfg.modes.len()];
            for (i, slot) in tau.iter_mut().enumerate().skip(1) {
                let p = cfg.modes.momentum(i);
                *slot = quadratic_form(p, eta[i], scaled.n * scaled.fourier_transform(p)?)?.tau;
            }
            t_tau = Some((build_generalized_bogoliubov(&tau, &excitations)?, tau));
        }
        Ok(Self { particles, excitations, hamiltonian, hamiltonian_report, excitation_map, eta, t_eta, cubic, t_tau, scaled })
    }

    /// The unitaries `T(eta)`, `e^A`, `T(tau)` that are present, in order.
    pub fn unitaries(&self) -> Vec<(&'static str, &SparseOperator)> {
        let mut out = vec![("T(eta)", &self.t_eta)];
        if let Some((ea, _)) = &self.cubic {
            out.push(("exp(A)", ea));
        }
        if let Some((tt, _)) = &self.t_tau {
            out.push(("T(tau)", tt));
        }
        out
    }

    /// `U H U*`, then successive conjugations by each unitary.
    pub fn stages(&self) -> Vec<(&'static str, SparseOperator)> {
        let mut stage = conjugate(&self.hamiltonian, &self.excitation_map.transpose());
        let mut out = vec![("U", stage.clone())];
        for (name, w) in self.unitaries() {
            stage = conjugate(&stage, w);
            out.push((name, stage.clone()));
        }
        out
    }
}

pub fn simulate(cfg: &SimulationConfig) -> Result<SimulationReport> {
    let c = Cascade::new(cfg)?;
    let gs = ground_state(&c.hamiltonian, LanczosOptions::default())?;
    let psi = c.excitation_map.mul_vec(&gs.vector);
    let vac = c.excitations.condensate().expect("vacuum is in every excitation basis");
    let vacuum_expectations = c.stages().into_iter().map(|(name, op)| StageValue { stage: name.into(), value: op.get(vac, vac) }).collect();
    let condensate = overlap_diagnostic(&psi, &[], &c.excitations)?;
    let quadratic = overlap_diagnostic(&psi, &[&c.t_eta], &c.excitations)?;
    let full = if cfg.cascade {
        let ws: Vec<&SparseOperator> = c.unitaries().into_iter().map(|(_, w)| w).collect();
        Some(overlap_diagnostic(&psi, &ws, &c.excitations)?)
    } else {
        None
    };
    Ok(SimulationReport {
        dimension: c.particles.dim(),
        modes: cfg.modes.len(),
        e_exact: gs.energy,
        ground_state_residual: gs.residual,
        e_bogoliubov_prediction: bogoliubov_prediction(&c.scaled, &cfg.modes)?,
        vacuum_expectations,
        overlaps: Overlaps { condensate, quadratic, full },
        dropped_terms: DroppedTerms { hamiltonian: c.hamiltonian_report.dropped_terms, cubic: c.cubic.as_ref().map(|(_, r)| r.dropped_terms) },
        eta: c.eta.clone(),
        tau: c.t_tau.as_ref().map(|(_, t)| t.clone()),
    })
}
