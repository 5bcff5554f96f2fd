use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use rpe_lab::bench::{run_plan, ExperimentPlan, Method, SpectrumSource};
use rpe_lab::rpe::{run_rpe, RpeConfig};
use rpe_lab::spectrum::{make_initial_state, tfim_spectrum, ResidualPolicy};
use rpe_lab::{Executor, ShotOracle};

fn plan(trials: u64) -> ExperimentPlan {
    ExperimentPlan {
        spectrum: SpectrumSource::Tfim {
            sites: 8,
            coupling: 4.0,
        },
        methods: vec![
            Method::Rpe,
            Method::Qpe {
                ancilla: vec![8, 10],
                shots: 1,
            },
        ],
        epsilons: vec![1e-2, 1e-3],
        p0: vec![0.8],
        trials,
        master_seed: 1,
        ..ExperimentPlan::default()
    }
}

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_plan");
    group.sample_size(10);
    for trials in [16, 128] {
        let p = plan(trials);
        group.bench_with_input(BenchmarkId::new("sequential", trials), &p, |b, p| {
            b.iter(|| run_plan(p, &Executor::Sequential).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("parallel", trials), &p, |b, p| {
            b.iter(|| run_plan(p, &Executor::parallel(0)).unwrap())
        });
    }
    group.finish();
}

fn single_trial(c: &mut Criterion) {
    let s = tfim_spectrum(8, 4.0).unwrap();
    let sd = make_initial_state(&s.phases, s.ground_index, 0.8, ResidualPolicy::Random, 0).unwrap();
    let cfg = RpeConfig::full_depth(1e-3, 0.1, 0.25).unwrap();
    let mut seed = 0;
    c.bench_function("run_rpe eps=1e-3 p0=0.8", |b| {
        b.iter(|| {
            seed += 1;
            run_rpe(&cfg, &mut ShotOracle::sampled(&sd, seed)).unwrap()
        })
    });
}

criterion_group!(benches, sweep, single_trial);
criterion_main!(benches);
