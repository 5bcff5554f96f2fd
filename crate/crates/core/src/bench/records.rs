//! Trial records and their CSV form.

use std::cmp::Ordering;
use std::f64::consts::FRAC_PI_3;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub const CSV_HEADER: &str =
    "method,epsilon,xi,p0,delta,eta,seed,theta_J,lambda_0,error,success,T_max,T_total,N_s,J";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodKind {
    Rpe,
    RpeLowdepth,
    Qpe,
}

impl MethodKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Rpe => "rpe",
            Self::RpeLowdepth => "rpe_lowdepth",
            Self::Qpe => "qpe",
        }
    }
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MethodKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rpe" => Ok(Self::Rpe),
            "rpe_lowdepth" => Ok(Self::RpeLowdepth),
            "qpe" => Ok(Self::Qpe),
            _ => Err(invalid(format!("unknown method {s:?}"))),
        }
    }
}

/// Outcome of the per-level interval audit, kept in memory only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditSummary {
    pub all_in_ball: bool,
    pub all_in_interval: bool,
    pub chain_consistent: bool,
}

/// One trial. For QPE rows `epsilon = 2^{-n}`, `xi = 0`, `N_s` is the shot
/// count and `J` the ancilla count `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub method: MethodKind,
    pub epsilon: f64,
    pub xi: f64,
    pub p0: f64,
    pub delta: f64,
    pub eta: f64,
    pub seed: u64,
    /// `[−π, π)` representative.
    pub theta: f64,
    /// `[−π, π)` representative.
    pub lambda0: f64,
    pub error: f64,
    pub success: bool,
    pub t_max: u64,
    pub t_total: u128,
    pub shots: u64,
    pub levels: u32,
    pub wall_time: f64,
    pub audit: Option<AuditSummary>,
}

impl TrialRecord {
    /// Success threshold `πε/3`.
    pub fn threshold(epsilon: f64) -> f64 {
        FRAC_PI_3 * epsilon
    }

    pub fn recompute_success(&mut self) {
        self.success = self.error < Self::threshold(self.epsilon);
    }

    /// The overlap hypothesis `p₀ > 1 − δ` fails (RPE rows only).
    pub fn hypothesis_violated(&self) -> bool {
        self.method != MethodKind::Qpe && self.delta <= 1.0 - self.p0
    }

    /// Canonical order: method, epsilon, xi, seed, then the remaining fields.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.method
            .cmp(&other.method)
            .then(self.epsilon.total_cmp(&other.epsilon))
            .then(self.xi.total_cmp(&other.xi))
            .then(self.seed.cmp(&other.seed))
            .then(self.p0.total_cmp(&other.p0))
            .then(self.delta.total_cmp(&other.delta))
            .then(self.theta.total_cmp(&other.theta))
    }

    fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.method,
            fmt_f64(self.epsilon),
            fmt_f64(self.xi),
            fmt_f64(self.p0),
            fmt_f64(self.delta),
            fmt_f64(self.eta),
            self.seed,
            fmt_f64(self.theta),
            fmt_f64(self.lambda0),
            fmt_f64(self.error),
            u8::from(self.success),
            self.t_max,
            self.t_total,
            self.shots,
            self.levels,
        )
    }
}

/// 17 significant digits, which round-trips every `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn sort_canonical(records: &mut [TrialRecord]) {
    records.sort_by(TrialRecord::canonical_cmp);
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_owned(),
        source,
    }
}

/// Writes `records` in canonical order under the fixed header.
pub fn write_records_csv(records: &[TrialRecord], path: &Path) -> Result<()> {
    let mut buf = String::with_capacity(64 + records.len() * 256);
    records_csv_into(records, &mut buf);
    let mut f = std::fs::File::create(path).map_err(io_err(path))?;
    f.write_all(buf.as_bytes()).map_err(io_err(path))
}

pub fn records_csv_string(records: &[TrialRecord]) -> String {
    let mut buf = String::new();
    records_csv_into(records, &mut buf);
    buf
}

fn records_csv_into(records: &[TrialRecord], buf: &mut String) {
    let mut sorted: Vec<&TrialRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.canonical_cmp(b));
    buf.push_str(CSV_HEADER);
    buf.push('\n');
    for r in sorted {
        buf.push_str(&r.csv_row());
        buf.push('\n');
    }
}

/// Reads a records CSV. `success` is recomputed from `error` and `epsilon`.
pub fn read_records_csv(path: &Path) -> Result<Vec<TrialRecord>> {
    let csv_err = |source| Error::Csv {
        path: path.to_owned(),
        source,
    };
    let mut reader = csv::Reader::from_path(path).map_err(csv_err)?;
    let header = reader
        .headers()
        .map_err(csv_err)?
        .iter()
        .collect::<Vec<_>>()
        .join(",");
    if header != CSV_HEADER {
        return Err(Error::Record {
            path: path.to_owned(),
            line: 1,
            reason: format!("unexpected header {header:?}"),
        });
    }
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row.map_err(csv_err)?;
        let line = row.position().map_or(0, |p| p.line());
        let rec = parse_row(&row).map_err(|reason| Error::Record {
            path: path.to_owned(),
            line,
            reason,
        })?;
        out.push(rec);
    }
    Ok(out)
}

fn parse_row(row: &csv::StringRecord) -> std::result::Result<TrialRecord, String> {
    fn num<T: FromStr>(row: &csv::StringRecord, i: usize) -> std::result::Result<T, String> {
        let name = CSV_HEADER.split(',').nth(i).unwrap_or("?");
        let s = row.get(i).ok_or_else(|| format!("missing column {name}"))?;
        s.trim()
            .parse()
            .map_err(|_| format!("bad {name} value {s:?}"))
    }
    if row.len() != CSV_HEADER.split(',').count() {
        return Err(format!("expected 15 columns, found {}", row.len()));
    }
    let success = match row[10].trim() {
        "1" | "true" => true,
        "0" | "false" => false,
        other => return Err(format!("bad success value {other:?}")),
    };
    let mut r = TrialRecord {
        method: row[0].trim().parse().map_err(|e: Error| e.to_string())?,
        epsilon: num(row, 1)?,
        xi: num(row, 2)?,
        p0: num(row, 3)?,
        delta: num(row, 4)?,
        eta: num(row, 5)?,
        seed: num(row, 6)?,
        theta: num(row, 7)?,
        lambda0: num(row, 8)?,
        error: num(row, 9)?,
        success,
        t_max: num(row, 11)?,
        t_total: num(row, 12)?,
        shots: num(row, 13)?,
        levels: num(row, 14)?,
        wall_time: 0.0,
        audit: None,
    };
    r.recompute_success();
    if r.success != success {
        log::warn!(
            "success flag for seed {} disagrees with its error; recomputed",
            r.seed
        );
    }
    Ok(r)
}
