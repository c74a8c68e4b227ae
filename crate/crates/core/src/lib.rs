//! Numerics for Bogoliubov theory of dilute Bose gases in the Gross-Pitaevskii
//! regime on the unit torus.
//!
//! * [`potential`]: radial interactions, their Fourier transforms and rescalings.
//! * [`scattering`]: scattering length, Born terms, the Neumann problem and `eta_p`.
//! * [`lattice`]: `e_Lambda`, the Bogoliubov lattice sum, finite-volume Born series.
//! * [`bogoliubov`]: dispersion, energies, depletion and the `F_p, G_p, tau_p` pipeline.
//! * [`fockspace`]: exact truncated Fock-space realisation of the operator machinery.

pub mod acceptance;
pub mod bogoliubov;
pub mod error;
pub mod fockspace;
pub mod lattice;
pub mod ode;
pub mod potential;
pub mod quadrature;
pub mod radial;
pub mod scattering;

pub use error::{Error, Result};
pub use potential::{rescale, RadialInteraction, RadialPotential, ScaledPotential};
