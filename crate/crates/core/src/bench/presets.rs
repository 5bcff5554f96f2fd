//! Reference TFIM sweeps: error against depth for RPE and QPE, and the
//! depth/shot trade-off of the low-depth estimator.
//!
//! These presets use `η = 0.1` and `δ = 1.05 (1 − p₀)`, spread the
//! residual overlap randomly, target the ground state and average ten trials.

use super::plan::{DeltaPolicy, ExperimentPlan, Method, SpectrumSource};
use crate::seed;
use crate::spectrum::ResidualPolicy;

pub const REFERENCE_TRIALS: u64 = 10;

/// `ε = 2^{-3} … 2^{-14}`.
pub fn reference_epsilons() -> Vec<f64> {
    (3..=14).map(|k| (-(k as f64)).exp2()).collect()
}

fn base(master_seed: u64) -> ExperimentPlan {
    ExperimentPlan {
        spectrum: SpectrumSource::Tfim {
            sites: 8,
            coupling: 4.0,
        },
        target_index: None,
        residual: ResidualPolicy::Random,
        epsilons: reference_epsilons(),
        delta: DeltaPolicy::Margin(1.05),
        eta: 0.1,
        trials: REFERENCE_TRIALS,
        master_seed,
        ..ExperimentPlan::default()
    }
}

/// Full-depth RPE against textbook QPE at `p₀ ∈ {0.6, 0.8}`.
pub fn depth_sweep(master_seed: u64) -> ExperimentPlan {
    ExperimentPlan {
        methods: vec![
            Method::Rpe,
            Method::Qpe {
                ancilla: (3..=12).collect(),
                shots: 1,
            },
        ],
        p0: vec![0.6, 0.8],
        ..base(seed::derive(master_seed, &[4]))
    }
}

/// Low-depth RPE at `p₀ = 0.99` with `ξ ∈ {1, 0.3, 0.1}`.
pub fn xi_sweep(master_seed: u64) -> ExperimentPlan {
    ExperimentPlan {
        methods: vec![Method::RpeLowdepth {
            xi: vec![1.0, 0.3, 0.1],
        }],
        p0: vec![0.99],
        ..base(seed::derive(master_seed, &[5]))
    }
}

pub fn reference(master_seed: u64) -> Vec<ExperimentPlan> {
    vec![depth_sweep(master_seed), xi_sweep(master_seed)]
}

/// Plain-text notes written next to preset output.
pub fn assumptions() -> &'static str {
    "\
Reference TFIM phase-estimation sweeps.
Spectrum: periodic TFIM, L = 8, g = 4, U = exp(i pi H / (4 ||H||_2)); target = ground state.
Initial state: p0 on the target, residual 1 - p0 spread by normalised squared Gaussian draws.
Noise bound: delta = 1.05 (1 - p0). Failure bound: eta = 0.1. Trials per point: 10.
Accuracy grid: epsilon = 2^-3 .. 2^-14.
depth_sweep: rpe (xi = 1) and textbook qpe (n = 3..12 ancillas, one shot, modal outcome) at p0 = 0.6, 0.8.
xi_sweep: rpe_lowdepth with xi = 1, 0.3, 0.1 at p0 = 0.99.
eta, delta and the QPE post-processing are assumed values; compare trends, not absolute errors.
"
}
