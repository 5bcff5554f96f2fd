use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::plan::{ExperimentPlan, Method, SpectrumSource};
use super::records::{sort_canonical, AuditSummary, MethodKind, TrialRecord};
use crate::angle::Angle;
use crate::error::{invalid, Result};
use crate::exec::Executor;
use crate::oracle::ShotOracle;
use crate::qpe::{sample_qpe, QpeConfig, SamplerKind};
use crate::rpe::{audit, phase_error, run_rpe, RpeConfig};
use crate::seed;
use crate::spectrum::{make_initial_state, tfim_spectrum, SpectralDecomposition};

const SPECTRUM_STREAM: u64 = 0x5350_4543;

/// One `(method, ε or n, p₀, ξ)` point of a plan.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub index: u64,
    pub method: MethodKind,
    pub p0_index: usize,
    pub p0: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub xi: f64,
    pub setup: CellSetup,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CellSetup {
    Rpe(RpeConfig),
    Qpe(QpeConfig),
}

/// A cell that could not be run, with the reason.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedCell {
    pub method: MethodKind,
    pub epsilon: f64,
    pub xi: f64,
    pub p0: f64,
    pub delta: f64,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct PlanOutput {
    /// Canonically sorted.
    pub records: Vec<TrialRecord>,
    pub skipped: Vec<SkippedCell>,
}

/// The spectra a plan runs against, one per requested `p₀`.
pub fn build_spectra(plan: &ExperimentPlan) -> Result<Vec<SpectralDecomposition>> {
    let (phases, default_target, file_sd): (Vec<Angle>, usize, Option<SpectralDecomposition>) =
        match &plan.spectrum {
            SpectrumSource::Tfim { sites, coupling } => {
                let s = tfim_spectrum(*sites, *coupling)?;
                (s.phases, s.ground_index, None)
            }
            SpectrumSource::File { path } => {
                let sd = SpectralDecomposition::load_json(path)?;
                let phases = (0..sd.len()).map(|m| sd.phase(m)).collect();
                (phases, sd.target_index(), Some(sd))
            }
        };
    let target = plan.target_index.unwrap_or(default_target);
    if target >= phases.len() {
        return Err(invalid(format!(
            "target index {target} out of range for {} states",
            phases.len()
        )));
    }
    if plan.p0.is_empty() {
        let sd = file_sd.ok_or_else(|| invalid("plan needs at least one p0"))?;
        if plan.target_index.is_some_and(|t| t != sd.target_index()) {
            return Err(invalid("target_index override needs explicit p0 values"));
        }
        return Ok(vec![sd]);
    }
    plan.p0
        .iter()
        .enumerate()
        .map(|(i, &p0)| {
            let s = seed::derive(plan.master_seed, &[SPECTRUM_STREAM, i as u64]);
            make_initial_state(&phases, target, p0, plan.residual, s)
        })
        .collect()
}

/// Enumerates the plan's cells; invalid parameter combinations go to the
/// skipped list.
pub fn enumerate_cells(
    plan: &ExperimentPlan,
    spectra: &[SpectralDecomposition],
) -> (Vec<Cell>, Vec<SkippedCell>) {
    let mut cells = Vec::new();
    let mut skipped = Vec::new();
    let mut index = 0u64;
    for (p0_index, sd) in spectra.iter().enumerate() {
        let p0 = sd.p0();
        let delta = plan.delta.delta(p0);
        let mut push = |method: MethodKind, epsilon: f64, xi: f64, setup: Result<CellSetup>| {
            match setup {
                Ok(setup) => cells.push(Cell {
                    index,
                    method,
                    p0_index,
                    p0,
                    delta,
                    epsilon,
                    xi,
                    setup,
                }),
                Err(e) => skipped.push(SkippedCell {
                    method,
                    epsilon,
                    xi,
                    p0,
                    delta,
                    reason: e.to_string(),
                }),
            }
            index += 1;
        };
        for method in &plan.methods {
            match method {
                Method::Rpe => {
                    for &eps in &plan.epsilons {
                        let setup = RpeConfig::full_depth(eps, plan.eta, delta).map(CellSetup::Rpe);
                        push(MethodKind::Rpe, eps, 1.0, setup);
                    }
                }
                Method::RpeLowdepth { xi } => {
                    for &x in xi {
                        for &eps in &plan.epsilons {
                            let setup = RpeConfig::new(eps, plan.eta, delta, x).map(CellSetup::Rpe);
                            push(MethodKind::RpeLowdepth, eps, x, setup);
                        }
                    }
                }
                Method::Qpe { ancilla, shots } => {
                    for &n in ancilla {
                        let eps = (-(n as f64)).exp2();
                        let setup = QpeConfig::new(n, *shots).map(CellSetup::Qpe);
                        push(MethodKind::Qpe, eps, 0.0, setup);
                    }
                }
            }
        }
    }
    (cells, skipped)
}

fn run_trial(
    plan: &ExperimentPlan,
    cell: &Cell,
    sd: &SpectralDecomposition,
    trial: u64,
) -> Result<TrialRecord> {
    let trial_seed = seed::derive(plan.master_seed, &[cell.index, trial]);
    let lambda = sd.target_phase();
    let start = Instant::now();
    let (theta, t_max, t_total, shots, levels, audit_summary) = match &cell.setup {
        CellSetup::Rpe(cfg) => {
            let mut oracle =
                ShotOracle::new(sd, plan.oracle, trial_seed).with_accounting(plan.exact_accounting);
            let res = run_rpe(cfg, &mut oracle)?;
            let a = audit(cfg, &res, sd);
            let summary = AuditSummary {
                all_in_ball: a.all_in_ball(),
                all_in_interval: a.all_in_interval(),
                chain_consistent: a.chain_consistent(),
            };
            (
                res.theta,
                res.t_max,
                res.t_total,
                res.shots,
                res.levels,
                Some(summary),
            )
        }
        CellSetup::Qpe(cfg) => {
            let mut rng = seed::stream(trial_seed, &[]);
            let res = sample_qpe(sd, cfg, SamplerKind::Auto, &mut rng);
            (
                res.estimate,
                res.t_max,
                res.t_total,
                cfg.shots(),
                cfg.ancilla(),
                None,
            )
        }
    };
    let wall_time = start.elapsed().as_secs_f64();
    let mut rec = TrialRecord {
        method: cell.method,
        epsilon: cell.epsilon,
        xi: cell.xi,
        p0: cell.p0,
        delta: cell.delta,
        eta: plan.eta,
        seed: trial_seed,
        theta: theta.signed(),
        lambda0: lambda.signed(),
        error: phase_error(theta, lambda),
        success: false,
        t_max,
        t_total,
        shots,
        levels,
        wall_time,
        audit: audit_summary,
    };
    rec.recompute_success();
    Ok(rec)
}

/// Runs every `(cell, trial)` pair of `plan` on `executor`.
///
/// Output is independent of the executor: seeds depend only on
/// `(master_seed, cell, trial)` and records are sorted before returning.
pub fn run_plan(plan: &ExperimentPlan, executor: &Executor) -> Result<PlanOutput> {
    plan.validate()?;
    let spectra = build_spectra(plan)?;
    let (cells, mut skipped) = enumerate_cells(plan, &spectra);
    for s in &skipped {
        log::warn!(
            "skipping {} cell eps={} xi={} p0={}: {}",
            s.method,
            s.epsilon,
            s.xi,
            s.p0,
            s.reason
        );
    }
    for c in &cells {
        if c.method != MethodKind::Qpe && c.delta <= 1.0 - c.p0 {
            log::warn!(
                "{} cell eps={} xi={}: delta={} does not exceed 1 - p0 = {}; hypothesis violated",
                c.method,
                c.epsilon,
                c.xi,
                c.delta,
                1.0 - c.p0
            );
        }
    }
    let jobs: Vec<(usize, u64)> = (0..cells.len())
        .flat_map(|c| (0..plan.trials).map(move |t| (c, t)))
        .collect();
    let results = executor.map(jobs, |(c, t)| {
        let cell = &cells[c];
        (c, run_trial(plan, cell, &spectra[cell.p0_index], t))
    });
    let mut records = Vec::with_capacity(results.len());
    let mut failed_cells = std::collections::BTreeSet::new();
    for (c, r) in results {
        match r {
            Ok(rec) => records.push(rec),
            Err(e) => {
                if failed_cells.insert(c) {
                    let cell = &cells[c];
                    skipped.push(SkippedCell {
                        method: cell.method,
                        epsilon: cell.epsilon,
                        xi: cell.xi,
                        p0: cell.p0,
                        delta: cell.delta,
                        reason: e.to_string(),
                    });
                }
            }
        }
    }
    sort_canonical(&mut records);
    Ok(PlanOutput { records, skipped })
}
