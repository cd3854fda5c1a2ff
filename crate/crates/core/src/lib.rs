//! Numerics for Hermitian positive semidefinite matrices: the unique PSD
//! square root, commutation propagation, Loewner-order certificates, and
//! simultaneous diagonalization (unitary for commuting Hermitian pairs,
//! congruence for PSD pairs).
//!
//! Every algorithm has an independent cross-check in [`oracles`] or a second
//! route in the same module, and [`selftest`] runs the seeded property
//! corpora end to end.

pub mod congruence;
pub mod eigen;
pub mod error;
pub mod hermitian;
pub mod matrix;
pub mod oracles;
pub mod order;
pub mod selftest;
pub mod sqrtm;
pub mod tolerance;

pub use num_complex::Complex64;

pub use congruence::{congruence_diag, order_via_diagonals, reconstruct, CongruenceResult, Which};
pub use eigen::{eigh, sim_diag_commuting, EigenDecomposition, SimultaneousDiagonalization};
pub use error::{Error, Hypothesis, Result, Witness};
pub use hermitian::{cartesian_parts, quadratic_form, HermitianMatrix};
pub use matrix::{commutator_norm, matrix_equal, ComplexMatrix};
pub use order::{
    is_psd, loewner_geq, monotonicity_report, sqrt_monotone_check, MonotonicityReport,
    OrderCertificate, Verdict,
};
pub use sqrtm::{denman_beavers_sqrt, psd_sqrt, sqrt_commutes, sqrt_commutes_by_parts, SqrtResult};
pub use tolerance::Tolerances;
