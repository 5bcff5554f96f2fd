//! Quick invariant checks runnable from the CLI.

use std::f64::consts::{PI, TAU};

use rand::Rng;

use crate::angle::{candidate_set, wrap, Angle};
use crate::oracle::ShotOracle;
use crate::qpe::outcome_distribution;
use crate::rpe::{alpha, audit, beta, phase_error, run_rpe, shots_per_level, RpeConfig, DELTA_MAX};
use crate::seed;
use crate::spectrum::{
    build_tfim, eigendecompose, make_initial_state, spectral_phases, ResidualPolicy,
    SpectralDecomposition,
};

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, f: impl FnOnce() -> Result<String, String>) -> Check {
    match f() {
        Ok(detail) => Check {
            name,
            passed: true,
            detail,
        },
        Err(detail) => Check {
            name,
            passed: false,
            detail,
        },
    }
}

fn nearest_candidate_exhaustive() -> Result<String, String> {
    let mut rng = seed::stream(1, &[]);
    let cases = 2000;
    for _ in 0..cases {
        let j = rng.random_range(0..=12u32);
        let set = candidate_set(Angle::new(rng.random::<f64>() * TAU).unwrap(), j).unwrap();
        let prev = Angle::new(rng.random::<f64>() * TAU).unwrap();
        let d = set.member(set.nearest_index(prev)).distance(prev);
        let best = set
            .iter()
            .map(|m| m.distance(prev))
            .fold(f64::INFINITY, f64::min);
        if d > best + 1e-12 {
            return Err(format!("level {j}: O(1) choice at {d}, exhaustive {best}"));
        }
    }
    Ok(format!("{cases} random cases"))
}

fn reduction_identity() -> Result<String, String> {
    let n = 10_000;
    for i in 0..n {
        let d = DELTA_MAX * i as f64 / n as f64;
        let (a, b) = (alpha(d).unwrap(), beta(d, 1.0).unwrap());
        if (a - b).abs() > f64::EPSILON * a.abs().max(f64::MIN_POSITIVE) {
            return Err(format!("delta={d}: alpha={a} beta={b}"));
        }
    }
    Ok(format!("{n} grid points"))
}

fn shot_fixture() -> Result<String, String> {
    let n = shots_per_level(1e-3, 0.1, 0.2, 1.0).map_err(|e| e.to_string())?;
    if n == 202 {
        Ok("N_s = 202".into())
    } else {
        Err(format!("N_s = {n}, expected 202"))
    }
}

fn exact_recovery() -> Result<String, String> {
    let mut rng = seed::stream(2, &[]);
    let cfg = RpeConfig::full_depth(1e-6, 0.1, 0.0).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let lambda = rng.random::<f64>() * TAU;
        let sd = SpectralDecomposition::eigenstate(lambda).unwrap();
        let r = run_rpe(&cfg, &mut ShotOracle::exact(&sd)).map_err(|e| e.to_string())?;
        worst = worst.max(phase_error(r.theta, wrap(lambda).unwrap()));
    }
    if worst < 1e-12 {
        Ok(format!("worst error {worst:e}"))
    } else {
        Err(format!("worst error {worst:e}"))
    }
}

fn qpe_kernel() -> Result<String, String> {
    let mut rng = seed::stream(3, &[]);
    let n = 10;
    for _ in 0..100 {
        let lambda = rng.random::<f64>() * TAU;
        let dist = outcome_distribution(lambda, n);
        let sum: f64 = dist.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(format!("lambda={lambda}: sum {sum}"));
        }
        let k = (0..dist.len())
            .max_by(|&a, &b| dist[a].total_cmp(&dist[b]))
            .unwrap();
        let grid = TAU * k as f64 / dist.len() as f64;
        if wrap(grid - lambda).unwrap().distance(Angle::ZERO) > PI / dist.len() as f64 + 1e-12 {
            return Err(format!(
                "lambda={lambda}: peak at {k} is not a nearest grid point"
            ));
        }
    }
    Ok("100 phases, n = 10".into())
}

fn tfim_spectrum_check() -> Result<String, String> {
    let h = build_tfim(8, 4.0).map_err(|e| e.to_string())?;
    let eig = eigendecompose(&h).map_err(|e| e.to_string())?;
    let norm = eig.norm();
    let mut worst: f64 = 0.0;
    for (k, e) in eig.values.iter().enumerate() {
        let v = eig.vectors.column(k);
        worst = worst.max((h.matrix() * v - v * *e).norm());
    }
    if worst > 1e-9 * norm {
        return Err(format!("eigen residual {worst:e}"));
    }
    let phases = spectral_phases(&eig.values).map_err(|e| e.to_string())?;
    if phases.iter().any(|a| a.signed().abs() > PI / 4.0 + 1e-14) {
        return Err("phase outside [-pi/4, pi/4]".into());
    }
    Ok(format!("E0 = {:.12}, residual {worst:.1e}", eig.values[0]))
}

fn interval_chain() -> Result<String, String> {
    let h = build_tfim(4, 2.0).map_err(|e| e.to_string())?;
    let eig = eigendecompose(&h).map_err(|e| e.to_string())?;
    let phases = spectral_phases(&eig.values).map_err(|e| e.to_string())?;
    let sd = make_initial_state(&phases, 0, 0.7, ResidualPolicy::Random, 4)
        .map_err(|e| e.to_string())?;
    let cfg = RpeConfig::full_depth(1e-3, 0.1, 0.315).unwrap();
    let trials = 50;
    for t in 0..trials {
        let r = run_rpe(&cfg, &mut ShotOracle::sampled(&sd, t)).map_err(|e| e.to_string())?;
        if !audit(&cfg, &r, &sd).chain_consistent() {
            return Err(format!(
                "trial {t}: estimates in their balls but an interval was missed"
            ));
        }
    }
    Ok(format!("{trials} sampled trials"))
}

pub fn run_all() -> Vec<Check> {
    vec![
        check(
            "nearest candidate = exhaustive argmin",
            nearest_candidate_exhaustive,
        ),
        check("beta(delta, 1) = alpha(delta)", reduction_identity),
        check("shot-count fixture", shot_fixture),
        check("exact-oracle recovery", exact_recovery),
        check("QPE kernel normalisation and peak", qpe_kernel),
        check("TFIM eigensystem and phase range", tfim_spectrum_check),
        check("interval chain under the ball condition", interval_chain),
    ]
}

#[cfg(test)]
mod tests {
    #[test]
    fn selftest_passes() {
        for c in super::run_all() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
