use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rpe_lab::bench::{
    self, presets, read_records_csv, summarize, write_plot_script, write_records_csv, DeltaPolicy,
    ExperimentPlan, Method, SpectrumSource, TrialRecord,
};
use rpe_lab::exec::{Executor, WORKERS_ENV};
use rpe_lab::oracle::OracleMode;
use rpe_lab::spectrum::{make_initial_state, tfim_spectrum, ResidualPolicy};
use rpe_lab::{selftest, Error, Result};

#[derive(Parser)]
#[command(
    name = "rpe-lab",
    version,
    about = "Robust phase estimation simulation and benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute an experiment plan and write per-trial records.
    Run(Box<RunArgs>),
    /// Aggregate a records CSV per (method, epsilon, p0, xi).
    Summarize {
        records: PathBuf,
        /// Output CSV; stdout when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Emit a gnuplot script for a records CSV.
    Plot {
        records: PathBuf,
        #[arg(short, long, default_value = "plot.gp")]
        out: PathBuf,
    },
    /// Dump a TFIM spectrum as JSON.
    Spectrum {
        #[arg(long, default_value_t = 8)]
        sites: usize,
        #[arg(long, default_value_t = 4.0)]
        coupling: f64,
        /// Overlap with the target eigenstate.
        #[arg(long, default_value_t = 1.0)]
        p0: f64,
        /// Target eigenstate; ground state when omitted.
        #[arg(long)]
        target: Option<usize>,
        /// uniform, random or single:<index>
        #[arg(long, default_value = "random")]
        residual: ResidualPolicy,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in invariant checks.
    Selftest,
}

#[derive(Args)]
struct RunArgs {
    /// TOML plan; flags below override its values.
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Run the reference TFIM sweeps (depth_sweep + xi_sweep).
    #[arg(long, alias = "paper", conflicts_with = "config")]
    reference: bool,
    #[arg(short, long, default_value = "records.csv")]
    out: PathBuf,
    /// Also write a per-cell summary CSV.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Also write a gnuplot script.
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Worker threads; 1 runs sequentially, 0 uses every core.
    #[arg(long, env = WORKERS_ENV)]
    workers: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    epsilon: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    p0: Option<Vec<f64>>,
    /// Fixed noise bound for every p0.
    #[arg(long, conflicts_with = "delta_margin")]
    delta: Option<f64>,
    /// delta = (1 - p0) * margin.
    #[arg(long)]
    delta_margin: Option<f64>,
    /// Replace the method list with low-depth RPE at these prefactors.
    #[arg(long, value_delimiter = ',')]
    xi: Option<Vec<f64>>,
    /// Add textbook QPE with these ancilla counts.
    #[arg(long, value_delimiter = ',')]
    qpe: Option<Vec<u32>>,
    #[arg(long)]
    sites: Option<usize>,
    #[arg(long)]
    coupling: Option<f64>,
    /// Spectrum JSON to use instead of the TFIM.
    #[arg(long)]
    spectrum: Option<PathBuf>,
    #[arg(long)]
    residual: Option<ResidualPolicy>,
    /// Use exact expectations instead of sampled shots.
    #[arg(long)]
    exact: bool,
}

impl RunArgs {
    fn apply(&self, plan: &mut ExperimentPlan) {
        if let Some(s) = self.seed {
            plan.master_seed = s;
        }
        if let Some(t) = self.trials {
            plan.trials = t;
        }
        if let Some(e) = self.eta {
            plan.eta = e;
        }
        if let Some(e) = &self.epsilon {
            plan.epsilons = e.clone();
        }
        if let Some(p) = &self.p0 {
            plan.p0 = p.clone();
        }
        if let Some(d) = self.delta {
            plan.delta = DeltaPolicy::Value(d);
        }
        if let Some(m) = self.delta_margin {
            plan.delta = DeltaPolicy::Margin(m);
        }
        if let Some(xi) = &self.xi {
            plan.methods = vec![Method::RpeLowdepth { xi: xi.clone() }];
        }
        if let Some(n) = &self.qpe {
            plan.methods.push(Method::Qpe {
                ancilla: n.clone(),
                shots: 1,
            });
        }
        if self.sites.is_some() || self.coupling.is_some() {
            let (mut l, mut g) = match plan.spectrum {
                SpectrumSource::Tfim { sites, coupling } => (sites, coupling),
                SpectrumSource::File { .. } => (8, 4.0),
            };
            l = self.sites.unwrap_or(l);
            g = self.coupling.unwrap_or(g);
            plan.spectrum = SpectrumSource::Tfim {
                sites: l,
                coupling: g,
            };
        }
        if let Some(path) = &self.spectrum {
            plan.spectrum = SpectrumSource::File { path: path.clone() };
            if self.p0.is_none() {
                plan.p0.clear();
            }
        }
        if let Some(r) = self.residual {
            plan.residual = r;
        }
        if self.exact {
            plan.oracle = OracleMode::Exact;
        }
    }

    fn executor(&self) -> Executor {
        match self.workers {
            Some(1) => Executor::Sequential,
            Some(n) => Executor::parallel(n),
            None => Executor::from_env(),
        }
    }
}

fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

fn run(args: RunArgs) -> Result<()> {
    let plans = if args.reference {
        let seed = args.seed.unwrap_or(0);
        let mut plans = presets::reference(seed);
        for p in &mut plans {
            if let Some(t) = args.trials {
                p.trials = t;
            }
        }
        plans
    } else {
        let mut plan = match &args.config {
            Some(path) => ExperimentPlan::load(path)?,
            None => ExperimentPlan::default(),
        };
        args.apply(&mut plan);
        vec![plan]
    };
    let executor = args.executor();
    let mut records: Vec<TrialRecord> = Vec::new();
    for plan in &plans {
        let out = bench::run_plan(plan, &executor)?;
        for s in &out.skipped {
            eprintln!(
                "skipped {} eps={} xi={} p0={} delta={}: {}",
                s.method, s.epsilon, s.xi, s.p0, s.delta, s.reason
            );
        }
        records.extend(out.records);
    }
    write_records_csv(&records, &args.out)?;
    eprintln!("wrote {} records to {}", records.len(), args.out.display());
    if args.reference {
        let notes = sidecar(&args.out, ".assumptions.txt");
        write_text(&notes, presets::assumptions())?;
    }
    if args.summary.is_some() || args.plot.is_some() {
        let rows = summarize(&records)?;
        if let Some(path) = &args.summary {
            bench::write_summary_csv(&rows, path)?;
        }
        if let Some(path) = &args.plot {
            write_plot_script(&rows, path)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(*args),
        Command::Summarize { records, out } => read_records_csv(&records)
            .and_then(|r| summarize(&r))
            .and_then(|rows| {
                let text = bench::summary::summary_csv_string(&rows);
                match out {
                    Some(path) => write_text(&path, &text),
                    None => {
                        print!("{text}");
                        Ok(())
                    }
                }
            }),
        Command::Plot { records, out } => read_records_csv(&records)
            .and_then(|r| summarize(&r))
            .and_then(|rows| write_plot_script(&rows, &out)),
        Command::Spectrum {
            sites,
            coupling,
            p0,
            target,
            residual,
            seed,
            out,
        } => tfim_spectrum(sites, coupling)
            .and_then(|s| {
                make_initial_state(
                    &s.phases,
                    target.unwrap_or(s.ground_index),
                    p0,
                    residual,
                    seed,
                )
            })
            .and_then(|sd| match out {
                Some(path) => sd.save_json(&path),
                None => {
                    println!("{}", serde_json::to_string_pretty(&sd)?);
                    Ok(())
                }
            }),
        Command::Selftest => {
            let checks = selftest::run_all();
            let failed = checks.iter().filter(|c| !c.passed).count();
            for c in &checks {
                println!(
                    "[{}] {}: {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            if failed == 0 {
                Ok(())
            } else {
                Err(Error::ContractViolation(format!(
                    "{failed} self-test check(s) failed"
                )))
            }
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
