use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::records::{fmt_f64, MethodKind, TrialRecord};
use crate::error::{invalid, Error, Result};
use crate::stats;

pub const SUMMARY_HEADER: &str = "method,epsilon,xi,p0,delta,eta,trials,mean_error,median_error,failures,failure_rate,failure_lo95,failure_hi95,mean_T_max,max_T_max,mean_T_total,hypothesis_violated";

/// Aggregate over the trials of one `(method, ε, p₀, ξ)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub method: MethodKind,
    pub epsilon: f64,
    pub xi: f64,
    pub p0: f64,
    pub delta: f64,
    pub eta: f64,
    pub trials: u64,
    pub mean_error: f64,
    pub median_error: f64,
    pub failures: u64,
    pub failure_rate: f64,
    /// Wilson 95% interval on the failure rate.
    pub failure_interval: (f64, f64),
    pub mean_t_max: f64,
    pub max_t_max: u64,
    pub mean_t_total: f64,
    pub hypothesis_violated: bool,
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct Key(MethodKind, u64, u64, u64);

fn ordered_bits(x: f64) -> u64 {
    // monotone map from f64 total order to u64
    let b = x.to_bits();
    if b >> 63 == 1 {
        !b
    } else {
        b | (1 << 63)
    }
}

/// Groups by `(method, ε, p₀, ξ)`; rows come out in canonical order.
pub fn summarize(records: &[TrialRecord]) -> Result<Vec<CellSummary>> {
    if records.is_empty() {
        return Err(invalid("no records to summarize"));
    }
    let mut groups: BTreeMap<Key, Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        let key = Key(
            r.method,
            ordered_bits(r.epsilon),
            ordered_bits(r.xi),
            ordered_bits(r.p0),
        );
        groups.entry(key).or_default().push(r);
    }
    let mut out = Vec::with_capacity(groups.len());
    for group in groups.into_values() {
        let Some(first) = group.first() else {
            log::warn!("empty group omitted");
            continue;
        };
        let n = group.len() as u64;
        let errors: Vec<f64> = group.iter().map(|r| r.error).collect();
        let failures = group.iter().filter(|r| !r.success).count() as u64;
        let t_max: Vec<f64> = group.iter().map(|r| r.t_max as f64).collect();
        let t_total: Vec<f64> = group.iter().map(|r| r.t_total as f64).collect();
        out.push(CellSummary {
            method: first.method,
            epsilon: first.epsilon,
            xi: first.xi,
            p0: first.p0,
            delta: first.delta,
            eta: first.eta,
            trials: n,
            mean_error: stats::mean(&errors).unwrap_or(f64::NAN),
            median_error: stats::median(&errors).unwrap_or(f64::NAN),
            failures,
            failure_rate: failures as f64 / n as f64,
            failure_interval: stats::wilson(failures, n, stats::Z_95),
            mean_t_max: stats::mean(&t_max).unwrap_or(f64::NAN),
            max_t_max: group.iter().map(|r| r.t_max).max().unwrap_or(0),
            mean_t_total: stats::mean(&t_total).unwrap_or(f64::NAN),
            hypothesis_violated: group.iter().any(|r| r.hypothesis_violated()),
        });
    }
    Ok(out)
}

pub fn summary_csv_string(rows: &[CellSummary]) -> String {
    let mut buf = String::from(SUMMARY_HEADER);
    buf.push('\n');
    for s in rows {
        buf.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            s.method,
            fmt_f64(s.epsilon),
            fmt_f64(s.xi),
            fmt_f64(s.p0),
            fmt_f64(s.delta),
            fmt_f64(s.eta),
            s.trials,
            fmt_f64(s.mean_error),
            fmt_f64(s.median_error),
            s.failures,
            fmt_f64(s.failure_rate),
            fmt_f64(s.failure_interval.0),
            fmt_f64(s.failure_interval.1),
            fmt_f64(s.mean_t_max),
            s.max_t_max,
            fmt_f64(s.mean_t_total),
            u8::from(s.hypothesis_violated),
        ));
    }
    buf
}

pub fn write_summary_csv(rows: &[CellSummary], path: &Path) -> Result<()> {
    std::fs::write(path, summary_csv_string(rows)).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}
