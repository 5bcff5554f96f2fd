//! Hadamard-test simulation.
//!
//! Each shot of the test for `⟨ψ|U^{2^j}|ψ⟩` is a ±1 outcome whose mean is
//! the real part (no phase gate) or the imaginary part (with `S†`). Shots are
//! drawn as Bernoulli variables from the exact expectation; there is no
//! state-vector simulation.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::angle::MAX_LEVEL;
use crate::error::{invalid, Error, Result};
use crate::seed;
use crate::spectrum::{exact_expectation, SpectralDecomposition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Part {
    Real,
    Imag,
}

impl Part {
    fn key(self) -> u64 {
        match self {
            Part::Real => 0,
            Part::Imag => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMode {
    #[default]
    Sampled,
    /// Returns the exact expectation; for testing the estimator logic.
    Exact,
}

/// How depth is charged for [`OracleMode::Exact`] estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExactAccounting {
    /// Charge as if the requested shots had been run.
    #[default]
    AsSampled,
    Free,
}

/// Circuit-depth bookkeeping in applications of `U`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CostLedger {
    /// Sum of the depths of every executed circuit (`T_total`).
    pub total_depth: u128,
    /// Deepest single circuit (`T_max`).
    pub max_depth: u64,
}

impl CostLedger {
    pub fn charge(&mut self, depth: u64, shots: u64) {
        self.total_depth += depth as u128 * shots as u128;
        self.max_depth = self.max_depth.max(depth);
    }
}

fn power(level: u32) -> Result<u64> {
    if level > MAX_LEVEL {
        return Err(invalid(format!(
            "level {level} exceeds the supported maximum {MAX_LEVEL}"
        )));
    }
    Ok(1u64 << level)
}

/// Shot source for one trial. Not shared between workers.
#[derive(Debug, Clone)]
pub struct ShotOracle<'a> {
    sd: &'a SpectralDecomposition,
    mode: OracleMode,
    accounting: ExactAccounting,
    seed: u64,
    streams: BTreeMap<(u32, Part), ChaCha8Rng>,
    ledger: CostLedger,
}

impl<'a> ShotOracle<'a> {
    pub fn sampled(sd: &'a SpectralDecomposition, seed: u64) -> Self {
        Self::new(sd, OracleMode::Sampled, seed)
    }

    pub fn exact(sd: &'a SpectralDecomposition) -> Self {
        Self::new(sd, OracleMode::Exact, 0)
    }

    pub fn new(sd: &'a SpectralDecomposition, mode: OracleMode, seed: u64) -> Self {
        Self {
            sd,
            mode,
            accounting: ExactAccounting::default(),
            seed,
            streams: BTreeMap::new(),
            ledger: CostLedger::default(),
        }
    }

    pub fn with_accounting(mut self, accounting: ExactAccounting) -> Self {
        self.accounting = accounting;
        self
    }

    pub fn mode(&self) -> OracleMode {
        self.mode
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        self.sd
    }

    pub fn ledger(&self) -> CostLedger {
        self.ledger
    }

    /// `⟨ψ|U^{2^level}|ψ⟩`.
    pub fn expectation(&self, level: u32) -> Result<Complex64> {
        Ok(exact_expectation(self.sd, power(level)?))
    }

    fn stream(&mut self, level: u32, part: Part) -> &mut ChaCha8Rng {
        let seed = self.seed;
        self.streams
            .entry((level, part))
            .or_insert_with(|| seed::stream(seed, &[level as u64, part.key()]))
    }

    /// Number of `+1` outcomes among `shots` draws with mean `mean`.
    fn draw(&mut self, level: u32, part: Part, mean: f64, shots: u64) -> u64 {
        let p_plus = ((1.0 + mean) * 0.5).clamp(0.0, 1.0);
        let rng = self.stream(level, part);
        (0..shots).filter(|_| rng.random::<f64>() < p_plus).count() as u64
    }

    fn component(z: Complex64, part: Part) -> f64 {
        match part {
            Part::Real => z.re,
            Part::Imag => z.im,
        }
    }

    /// One Hadamard-test outcome for `U^{2^level}`.
    pub fn sample_shot(&mut self, level: u32, part: Part) -> Result<i8> {
        if self.mode == OracleMode::Exact {
            return Err(Error::ContractViolation(
                "sample_shot called on an exact oracle".into(),
            ));
        }
        let depth = power(level)?;
        let mean = Self::component(self.expectation(level)?, part);
        let plus = self.draw(level, part, mean, 1);
        self.ledger.charge(depth, 1);
        Ok(if plus == 1 { 1 } else { -1 })
    }

    /// Estimate `Z_j` of `⟨ψ|U^{2^level}|ψ⟩` from `shots / 2` real-part and
    /// `shots / 2` imaginary-part outcomes.
    pub fn estimate_z(&mut self, level: u32, shots: u64) -> Result<Complex64> {
        let depth = power(level)?;
        let exact = self.expectation(level)?;
        match self.mode {
            OracleMode::Exact => {
                if self.accounting == ExactAccounting::AsSampled {
                    self.ledger.charge(depth, shots);
                }
                Ok(exact)
            }
            OracleMode::Sampled => {
                if shots < 2 || !shots.is_multiple_of(2) {
                    return Err(invalid(format!(
                        "shot count must be even and at least 2, got {shots}"
                    )));
                }
                let half = shots / 2;
                let mean = |plus: u64| (2.0 * plus as f64 - half as f64) / half as f64;
                let re = mean(self.draw(level, Part::Real, exact.re, half));
                let im = mean(self.draw(level, Part::Imag, exact.im, half));
                self.ledger.charge(depth, shots);
                Ok(Complex64::new(re, im))
            }
        }
    }
}
