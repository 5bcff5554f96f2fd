//! Classical simulation of robust phase estimation.
//!
//! The estimator ([`rpe`]) climbs dyadic powers `U^{2^j}`, pruning a candidate
//! set at each level with Hadamard-test estimates ([`oracle`]). A textbook QFT
//! baseline ([`qpe`]) and spectral models such as the transverse-field Ising
//! chain ([`spectrum`]) complete the picture, and [`bench`] runs seeded,
//! reproducible sweeps over all of them.

pub mod angle;
pub mod bench;
pub mod error;
pub mod exec;
pub mod oracle;
pub mod qpe;
pub mod rpe;
pub mod seed;
pub mod selftest;
pub mod spectrum;
pub mod stats;

pub use angle::{candidate_set, nearest_candidate, wrap, wrapped_abs, Angle, CandidateSet};
pub use error::{Error, Result};
pub use exec::Executor;
pub use oracle::{CostLedger, ExactAccounting, OracleMode, Part, ShotOracle};
pub use qpe::{sample_qpe, QpeConfig, QpeResult, SamplerKind};
pub use rpe::{
    alpha, beta, run_rpe, shots_per_level, xi_lower_bound, RpeConfig, RpeResult, RpeTrace,
};
pub use spectrum::{
    build_tfim, eigendecompose, exact_expectation, make_initial_state, spectral_phases,
    HamiltonianModel, ResidualPolicy, SpectralDecomposition,
};
