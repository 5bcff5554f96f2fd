//! Textbook QFT phase estimation, simulated through its outcome law.
//!
//! With `n` ancillas and an eigenstate of phase `λ`, outcome `k` occurs with
//! probability `|sin(2^{n−1}Δ) / sin(Δ/2)|² / 4^n`, `Δ = λ − 2πk/2^n` (a
//! Fejér kernel). A general input state first collapses onto eigenstate `m`
//! with probability `p_m`.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rand::Rng;
use rand_distr::{Distribution, Zipf};
use serde::{Deserialize, Serialize};

use crate::angle::{self, Angle};
use crate::error::{invalid, Result};
use crate::spectrum::SpectralDecomposition;

pub const MAX_ANCILLA: u32 = 24;
/// Above this the outcome table is not built and rejection sampling is used.
pub const MAX_TABULATED_ANCILLA: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QpeConfig {
    ancilla: u32,
    shots: u64,
}

impl QpeConfig {
    pub fn new(ancilla: u32, shots: u64) -> Result<Self> {
        if !(1..=MAX_ANCILLA).contains(&ancilla) {
            return Err(invalid(format!(
                "ancilla count must lie in 1..={MAX_ANCILLA}, got {ancilla}"
            )));
        }
        if shots == 0 {
            return Err(invalid("QPE needs at least one shot"));
        }
        Ok(Self { ancilla, shots })
    }

    pub fn ancilla(&self) -> u32 {
        self.ancilla
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn grid_size(&self) -> u64 {
        1u64 << self.ancilla
    }

    /// Controlled powers `U, U², …, U^{2^{n−1}}`: `2^n − 1` applications.
    pub fn depth_per_shot(&self) -> u64 {
        self.grid_size() - 1
    }
}

/// `P(k | λ)` for `n` ancillas.
pub fn outcome_probability(lambda: f64, ancilla: u32, k: u64) -> f64 {
    let size = (1u64 << ancilla) as f64;
    let delta = lambda - TAU * k as f64 / size;
    let den = (0.5 * delta).sin();
    if den.abs() < 1e-12 {
        // Δ ≡ 0 (mod 2π): the kernel peaks at 1
        return 1.0;
    }
    let num = (0.5 * size * delta).sin();
    (num / den).powi(2) / (size * size)
}

/// The full outcome table, indexed by `k`.
pub fn outcome_distribution(lambda: f64, ancilla: u32) -> Vec<f64> {
    (0..1u64 << ancilla)
        .map(|k| outcome_probability(lambda, ancilla, k))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerKind {
    /// Table up to [`MAX_TABULATED_ANCILLA`], rejection above.
    #[default]
    Auto,
    Table,
    Rejection,
}

struct Cdf(Vec<f64>);

impl Cdf {
    fn new(lambda: f64, ancilla: u32) -> Self {
        let mut acc = 0.0;
        Cdf(outcome_distribution(lambda, ancilla)
            .into_iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect())
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let total = *self.0.last().expect("nonempty table");
        let u = rng.random::<f64>() * total;
        let k = self.0.partition_point(|c| *c <= u);
        k.min(self.0.len() - 1) as u64
    }
}

/// Exact sampling from the kernel without tabulating it.
///
/// Proposal: pick a side of `c = 2^n λ / 2π`, then an offset `m ≥ 0` from
/// the bracketing grid point with weight `1` for `m = 0` and `1/(4m²)`
/// otherwise. Since `sin x ≥ 2x/π` on `[0, π/2]`, the kernel at distance
/// `u ≥ m` grid steps is at most `1/(4u²)`, so the weights dominate it.
struct RejectionSampler {
    ancilla: u32,
    lambda: f64,
    floor: u64,
    max_offset: u64,
    zero_mass: f64,
    zipf: Zipf<f64>,
}

impl RejectionSampler {
    fn new(lambda: f64, ancilla: u32) -> Self {
        debug_assert!(ancilla >= 2);
        let size = 1u64 << ancilla;
        let lambda = angle::wrap_unchecked(lambda);
        let c = size as f64 * lambda / TAU;
        let floor = (c.floor() as u64).min(size - 1);
        let max_offset = size / 2 - 1;
        let tail: f64 = (1..=max_offset).map(|m| 0.25 / (m as f64 * m as f64)).sum();
        Self {
            ancilla,
            lambda,
            floor,
            max_offset,
            zero_mass: 1.0 / (1.0 + tail),
            zipf: Zipf::new(max_offset as f64, 2.0).expect("max_offset >= 1"),
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let mask = (1u64 << self.ancilla) - 1;
        loop {
            let right = rng.random::<bool>();
            let (m, weight) = if rng.random::<f64>() < self.zero_mass {
                (0, 1.0)
            } else {
                let m = (self.zipf.sample(rng) as u64).clamp(1, self.max_offset);
                (m, 0.25 / (m as f64 * m as f64))
            };
            let k = if right {
                self.floor.wrapping_add(1 + m) & mask
            } else {
                self.floor.wrapping_sub(m) & mask
            };
            let p = outcome_probability(self.lambda, self.ancilla, k);
            if rng.random::<f64>() * weight < p {
                return k;
            }
        }
    }
}

enum OutcomeSampler {
    Table(Cdf),
    Rejection(RejectionSampler),
}

impl OutcomeSampler {
    fn new(lambda: f64, ancilla: u32, kind: SamplerKind) -> Self {
        let table = match kind {
            SamplerKind::Table => true,
            SamplerKind::Rejection => ancilla < 2,
            SamplerKind::Auto => ancilla <= MAX_TABULATED_ANCILLA,
        };
        if table {
            Self::Table(Cdf::new(lambda, ancilla))
        } else {
            Self::Rejection(RejectionSampler::new(lambda, ancilla))
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match self {
            Self::Table(t) => t.sample(rng),
            Self::Rejection(r) => r.sample(rng),
        }
    }
}

/// One ancilla readout for eigenphase `lambda`.
pub fn sample_outcome<R: Rng + ?Sized>(
    lambda: f64,
    ancilla: u32,
    kind: SamplerKind,
    rng: &mut R,
) -> u64 {
    OutcomeSampler::new(lambda, ancilla, kind).sample(rng)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QpeResult {
    pub estimate: Angle,
    /// Modal grid index.
    pub outcome: u64,
    pub t_max: u64,
    pub t_total: u128,
}

/// Runs `config.shots()` QPE circuits on `sd` and returns the modal outcome.
pub fn sample_qpe<R: Rng + ?Sized>(
    sd: &SpectralDecomposition,
    config: &QpeConfig,
    kind: SamplerKind,
    rng: &mut R,
) -> QpeResult {
    let mut cdf_states = Vec::with_capacity(sd.len());
    let mut acc = 0.0;
    for w in sd.weights() {
        acc += w;
        cdf_states.push(acc);
    }
    let mut samplers: BTreeMap<usize, OutcomeSampler> = BTreeMap::new();
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for _ in 0..config.shots {
        let u = rng.random::<f64>() * acc;
        let m = cdf_states.partition_point(|c| *c <= u).min(sd.len() - 1);
        let sampler = samplers
            .entry(m)
            .or_insert_with(|| OutcomeSampler::new(sd.phases()[m], config.ancilla, kind));
        *counts.entry(sampler.sample(rng)).or_default() += 1;
    }
    // BTreeMap iterates by ascending k, so strict > keeps the smallest k on ties
    let mut outcome = 0;
    let mut best = 0;
    for (k, c) in counts {
        if c > best {
            best = c;
            outcome = k;
        }
    }
    let estimate =
        angle::wrap(TAU * outcome as f64 / config.grid_size() as f64).expect("finite grid angle");
    QpeResult {
        estimate,
        outcome,
        t_max: config.depth_per_shot(),
        t_total: config.shots as u128 * config.depth_per_shot() as u128,
    }
}
