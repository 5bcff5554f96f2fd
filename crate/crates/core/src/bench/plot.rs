//! gnuplot script generation.
//!
//! The script embeds its data as inline blocks and draws two log-log panels,
//! mean error against `T_max` and against `T_total`, one series per
//! `(method, ξ, p₀)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use super::records::MethodKind;
use super::summary::CellSummary;
use crate::error::{invalid, Error, Result};

fn series_title(method: MethodKind, xi: f64, p0: f64) -> String {
    match method {
        MethodKind::Rpe | MethodKind::Qpe => format!("{method} p0={p0}"),
        MethodKind::RpeLowdepth => format!("{method} xi={xi} p0={p0}"),
    }
}

/// Renders the script; `image` is the PNG it will write.
pub fn plot_script(rows: &[CellSummary], image: &str) -> Result<String> {
    if rows.is_empty() {
        return Err(invalid("nothing to plot"));
    }
    let mut series: BTreeMap<(MethodKind, u64, u64), Vec<&CellSummary>> = BTreeMap::new();
    for r in rows {
        series
            .entry((r.method, r.xi.to_bits(), r.p0.to_bits()))
            .or_default()
            .push(r);
    }
    let mut s = String::new();
    let _ = writeln!(s, "# mean error vs circuit depth, generated by rpe-lab");
    let _ = writeln!(s, "set terminal pngcairo size 1400,560 enhanced");
    let _ = writeln!(s, "set output '{}'", image.replace('\'', "''"));
    let mut titles = Vec::new();
    for (i, ((method, xi, p0), mut pts)) in series.into_iter().enumerate() {
        pts.sort_by(|a, b| a.mean_t_max.total_cmp(&b.mean_t_max));
        let _ = writeln!(s, "$s{i} << EOD");
        let _ = writeln!(s, "# T_max T_total mean_error");
        for p in pts {
            if p.mean_error > 0.0 {
                let _ = writeln!(
                    s,
                    "{:e} {:e} {:e}",
                    p.mean_t_max, p.mean_t_total, p.mean_error
                );
            } else {
                let _ = writeln!(
                    s,
                    "# eps={:e}: zero error, not drawable on log axes",
                    p.epsilon
                );
            }
        }
        let _ = writeln!(s, "EOD");
        titles.push(series_title(method, f64::from_bits(xi), f64::from_bits(p0)));
    }
    let _ = writeln!(s, "set multiplot layout 1,2");
    let _ = writeln!(s, "set logscale xy");
    let _ = writeln!(s, "set format x '10^{{%L}}'");
    let _ = writeln!(s, "set format y '10^{{%L}}'");
    let _ = writeln!(s, "set grid");
    let _ = writeln!(s, "set key top right");
    let _ = writeln!(s, "set ylabel 'mean error'");
    for (col, label) in [(1, "T_{max}"), (2, "T_{total}")] {
        let _ = writeln!(s, "set title 'Error vs {label}'");
        let _ = writeln!(s, "set xlabel '{label}'");
        let plots: Vec<String> = titles
            .iter()
            .enumerate()
            .map(|(i, t)| format!("$s{i} using {col}:3 with linespoints title '{t}'"))
            .collect();
        let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    }
    let _ = writeln!(s, "unset multiplot");
    Ok(s)
}

/// Writes the script to `path`; the image goes next to it as `<stem>.png`.
pub fn write_plot_script(rows: &[CellSummary], path: &Path) -> Result<()> {
    let image = path.with_extension("png");
    let image = image
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "plot.png".into());
    let text = plot_script(rows, &image)?;
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}
