//! Momentum lattices and the lattice sums of the finite-volume theory.
//!
//! Two lattices appear and are never converted into each other implicitly:
//! the integer lattice `Z^3` (used by the constant `e_Lambda`) and the momentum
//! lattice `2 pi Z^3` of the unit torus (used by every energy sum).

mod bogsum;
mod elambda;
mod ewald;
mod finite_volume;
mod shells;

pub use bogsum::{lhy_coefficient, bogoliubov_lattice_sum, bogoliubov_lattice_sum_with, bogoliubov_summand, sum_vs_integral_check, SumVsIntegral};
pub use elambda::{cube_partial_sums, e_lambda, e_lambda_abel, e_lambda_default, SumMethod};
pub use ewald::{periodic_green_constant, periodic_green_constant_with};
pub use finite_volume::{
    continuum_born_terms, finite_volume_scattering_length, FiniteVolumeOptions, FiniteVolumeResult, PointOrder,
    Truncation,
};
pub use shells::{cube_points, ShellTable};

use serde::Serialize;

/// A lattice sum together with how it was truncated and how far it can be trusted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticeSumResult {
    pub value: f64,
    /// Cube level `M` or squared shell radius `|n|^2`, depending on the sum.
    pub truncation: u64,
    pub error_estimate: f64,
    pub method: SumMethod,
}
