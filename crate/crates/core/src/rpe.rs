//! Robust phase estimation with an adjustable depth prefactor.
//!
//! Level `j = 0..=J` estimates `Z_j ≈ ⟨ψ|U^{2^j}|ψ⟩` from `N_s` Hadamard-test
//! shots, forms the `2^j` angles whose `2^j`-fold multiple is `arg Z_j`, and
//! keeps the one closest to the previous estimate. With prefactor `ξ < 1` the
//! ladder stops at `J = ⌈log₂(ξ/ε)⌉`, trading a shallower deepest circuit
//! for more shots per level. `ξ = 1` is the original algorithm.

use std::f64::consts::{FRAC_PI_3, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angle::{self, candidate_set, nearest_candidate, Angle, MAX_LEVEL};
use crate::error::{invalid, Result};
use crate::oracle::{CostLedger, ShotOracle};
use crate::spectrum::{exact_expectation, SpectralDecomposition};

/// Upper limit on the noise bound, `2√3 − 3`.
pub const DELTA_MAX: f64 = 0.464_101_615_137_754_4;

fn check_delta(delta: f64) -> Result<()> {
    if (0.0..DELTA_MAX).contains(&delta) {
        Ok(())
    } else {
        Err(invalid(format!(
            "delta must lie in [0, 2√3 − 3), got {delta}"
        )))
    }
}

/// Noise radius for `ξ = 1`: `(√3/2)(1 − δ) − δ`.
pub fn alpha(delta: f64) -> Result<f64> {
    check_delta(delta)?;
    Ok(3f64.sqrt() / 2.0 * (1.0 - delta) - delta)
}

/// Smallest admissible prefactor, `(3/π) arcsin(δ / (1 − δ))`.
pub fn xi_lower_bound(delta: f64) -> Result<f64> {
    if !(0.0..0.5).contains(&delta) {
        return Err(invalid(format!(
            "xi lower bound needs 0 <= delta < 1/2, got {delta}"
        )));
    }
    Ok(3.0 / PI * (delta / (1.0 - delta)).asin())
}

/// Noise radius for prefactor `ξ`: `(1 − δ) sin(πξ/3) − δ`.
pub fn beta(delta: f64, xi: f64) -> Result<f64> {
    check_delta(delta)?;
    let lower = xi_lower_bound(delta)?;
    if !(xi > lower && xi <= 1.0) {
        return Err(invalid(format!(
            "xi must lie in ({lower}, 1] for delta = {delta}, got {xi}"
        )));
    }
    Ok((1.0 - delta) * (PI * xi / 3.0).sin() - delta)
}

/// `J = ⌈log₂(ξ/ε)⌉`, clamped at zero.
///
/// A ratio within 4 ulps of a power of two is snapped onto it first so that
/// `J` does not depend on the last bit of `ξ/ε`.
pub fn level_count(epsilon: f64, xi: f64) -> Result<u32> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(invalid(format!("epsilon must be positive, got {epsilon}")));
    }
    let ratio = xi / epsilon;
    if !ratio.is_finite() {
        return Err(invalid(format!("xi/epsilon = {ratio} is not finite")));
    }
    let log = ratio.log2();
    let nearest = log.round();
    let pow = nearest.exp2();
    let j = if (ratio - pow).abs() <= 4.0 * pow * f64::EPSILON {
        nearest
    } else {
        log.ceil()
    };
    let j = j.max(0.0);
    if j > MAX_LEVEL as f64 {
        return Err(invalid(format!(
            "epsilon = {epsilon} needs {j} levels, more than the supported {MAX_LEVEL}"
        )));
    }
    Ok(j as u32)
}

fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("eta must lie in (0, 1), got {eta}")))
    }
}

/// Shots per level, `N_s = 2⌈(4/β²)(ln(4/η) + ln(J + 1))⌉`.
pub fn shots_per_level(epsilon: f64, eta: f64, delta: f64, xi: f64) -> Result<u64> {
    check_eta(eta)?;
    let radius = beta(delta, xi)?;
    let levels = level_count(epsilon, xi)?;
    Ok(shot_formula(radius, eta, levels))
}

fn shot_formula(radius: f64, eta: f64, levels: u32) -> u64 {
    let half = 4.0 / (radius * radius) * ((4.0 / eta).ln() + ((levels + 1) as f64).ln());
    2 * half.ceil() as u64
}

/// Validated estimator parameters with the derived `J` and `N_s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RpeConfig {
    epsilon: f64,
    eta: f64,
    delta: f64,
    xi: f64,
    levels: u32,
    shots: u64,
}

impl RpeConfig {
    pub fn new(epsilon: f64, eta: f64, delta: f64, xi: f64) -> Result<Self> {
        check_eta(eta)?;
        let radius = beta(delta, xi)?;
        let levels = level_count(epsilon, xi)?;
        Ok(Self {
            epsilon,
            eta,
            delta,
            xi,
            levels,
            shots: shot_formula(radius, eta, levels),
        })
    }

    /// The full-depth variant, `ξ = 1`.
    pub fn full_depth(epsilon: f64, eta: f64, delta: f64) -> Result<Self> {
        Self::new(epsilon, eta, delta, 1.0)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// Final level `J`.
    pub fn levels(&self) -> u32 {
        self.levels
    }

    /// Even shot count `N_s` per level.
    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn radius(&self) -> f64 {
        (1.0 - self.delta) * (PI * self.xi / 3.0).sin() - self.delta
    }

    pub fn nominal_max_depth(&self) -> u64 {
        1u64 << self.levels
    }

    /// `N_s (2^{J+1} − 1)`.
    pub fn nominal_total_depth(&self) -> u128 {
        self.shots as u128 * ((1u128 << (self.levels + 1)) - 1)
    }

    /// Accuracy guarantee `πε/3` on the final estimate.
    pub fn target_error(&self) -> f64 {
        FRAC_PI_3 * self.epsilon
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub level: u32,
    pub z: Complex64,
    pub arg_z: Angle,
    pub theta: Angle,
    /// Ledger after this level.
    pub ledger: CostLedger,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RpeTrace {
    pub levels: Vec<LevelRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RpeResult {
    pub theta: Angle,
    pub levels: u32,
    pub shots: u64,
    pub t_max: u64,
    pub t_total: u128,
    pub trace: RpeTrace,
}

/// Runs the estimator against `oracle` and returns `θ_J` with its trace.
pub fn run_rpe(config: &RpeConfig, oracle: &mut ShotOracle<'_>) -> Result<RpeResult> {
    let start = oracle.ledger();
    let mut theta = Angle::ZERO;
    let mut trace = RpeTrace {
        levels: Vec::with_capacity(config.levels as usize + 1),
    };
    for level in 0..=config.levels {
        let z = oracle.estimate_z(level, config.shots)?;
        let arg_z = Angle::arg_of(z);
        theta = nearest_candidate(&candidate_set(arg_z, level)?, theta);
        trace.levels.push(LevelRecord {
            level,
            z,
            arg_z,
            theta,
            ledger: oracle.ledger(),
        });
    }
    let end = oracle.ledger();
    Ok(RpeResult {
        theta,
        levels: config.levels,
        shots: config.shots,
        t_max: end.max_depth.max(start.max_depth),
        t_total: end.total_depth - start.total_depth,
        trace,
    })
}

/// Per-level check of a finished run against the known spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainAudit {
    /// `|Z_j − ⟨ψ|U^{2^j}|ψ⟩| < β(δ, ξ)` at each level.
    pub in_ball: Vec<bool>,
    /// `⌊θ_j − λ₀⌉ < πξ / (3·2^j)` at each level.
    pub in_interval: Vec<bool>,
    pub final_error: f64,
    /// `⌊θ_J − λ₀⌉ < πε/3`.
    pub success: bool,
}

impl ChainAudit {
    pub fn all_in_ball(&self) -> bool {
        self.in_ball.iter().all(|b| *b)
    }

    pub fn all_in_interval(&self) -> bool {
        self.in_interval.iter().all(|b| *b)
    }

    /// The induction: every estimate inside its ball forces every interval
    /// and the final accuracy.
    pub fn chain_consistent(&self) -> bool {
        !self.all_in_ball() || (self.all_in_interval() && self.success)
    }
}

pub fn audit(config: &RpeConfig, result: &RpeResult, sd: &SpectralDecomposition) -> ChainAudit {
    let lambda = sd.target_phase();
    let radius = config.radius();
    let mut in_ball = Vec::with_capacity(result.trace.levels.len());
    let mut in_interval = Vec::with_capacity(result.trace.levels.len());
    for rec in &result.trace.levels {
        let pow = 1u64 << rec.level;
        in_ball.push((rec.z - exact_expectation(sd, pow)).norm() < radius);
        let width = PI * config.xi / (3.0 * pow as f64);
        in_interval.push(rec.theta.distance(lambda) < width);
    }
    let final_error = result.theta.distance(lambda);
    ChainAudit {
        in_ball,
        in_interval,
        final_error,
        success: final_error < config.target_error(),
    }
}

/// `⌊θ − λ⌉`.
pub fn phase_error(theta: Angle, lambda: Angle) -> f64 {
    angle::wrapped_abs_unchecked(theta.value() - lambda.value())
}
