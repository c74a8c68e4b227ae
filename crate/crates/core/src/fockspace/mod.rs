//! Exact diagonalisation on a truncated bosonic Fock space: the many-body
//! Hamiltonian, the excitation map, generalised Bogoliubov transformations
//! and the cubic generator, all as explicit matrices.

mod basis;
mod linalg;
mod modes;
mod ops;
mod simulate;
mod sparse;

pub use basis::{BasisOptions, FockBasis, Space, DEFAULT_DIMENSION_CAP};
pub use linalg::{conjugate, eigenvalues, expm, ground_state, restricted_norm, GroundState, LanczosOptions};
pub use modes::ModeSet;
pub use ops::{
    adjoint, b, b_dag, build_cubic_generator, build_hamiltonian, build_hamiltonian_with, concat, excitation_map, excitation_number, pair_generator,
    word_operator, CubicReport, CubicWeights, HamiltonianReport, Letter, OperatorSum, Word,
};
pub use simulate::{
    bogoliubov_prediction, bogoliubov_residual, build_generalized_bogoliubov, overlap_diagnostic, simulate, Cascade,
    DroppedTerms, Overlaps, SimulationConfig, SimulationReport, StageValue,
};
pub use sparse::SparseOperator;
