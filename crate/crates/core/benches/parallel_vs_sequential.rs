//! Compares the rayon lag/seed sweeps against the sequential reference
//! paths. Run `cargo bench -p emh-core` for both, or with
//! `--no-default-features` to time the sequential fallback alone.

use criterion::{criterion_group, criterion_main, Criterion};

use emh_core::acf::{correlogram_values, correlogram_values_seq, SeMode};
use emh_core::runs::{runs_test, ZeroPolicy};
use emh_core::simulate::{generate, Model, SimulationSpec};
use emh_core::sweep;

fn walk_values(n: usize, seed: u64) -> Vec<f64> {
    let spec = SimulationSpec::new(
        Model::RandomWalk {
            drift: 0.0,
            step_sd: 1.0,
        },
        n,
        seed,
    );
    generate(&spec).unwrap().closes()
}

fn bench_correlogram(c: &mut Criterion) {
    let values = walk_values(20_000, 7);
    let mut group = c.benchmark_group("correlogram_n20000_k512");
    group.bench_function("sequential", |b| {
        b.iter(|| correlogram_values_seq(&values, 512, SeMode::LargeN).unwrap())
    });
    #[cfg(feature = "parallel")]
    group.bench_function("parallel", |b| {
        b.iter(|| correlogram_values(&values, 512, SeMode::LargeN).unwrap())
    });
    #[cfg(not(feature = "parallel"))]
    let _ = correlogram_values; // same path as sequential without the feature
    group.finish();
}

fn bench_runs_sweep(c: &mut Criterion) {
    let run_one = |seed: u64| {
        let spec = SimulationSpec::new(
            Model::RandomWalk {
                drift: 0.0,
                step_sd: 1.0,
            },
            2212,
            seed,
        );
        let series = generate(&spec).unwrap();
        runs_test(&series, ZeroPolicy::Exclude).unwrap().z
    };
    let mut group = c.benchmark_group("runs_test_sweep_64_seeds");
    group.sample_size(20);
    group.bench_function("sequential", |b| {
        b.iter(|| sweep::map_seeds_seq(1, 64, run_one))
    });
    #[cfg(feature = "parallel")]
    group.bench_function("parallel", |b| b.iter(|| sweep::map_seeds(1, 64, run_one)));
    group.finish();
}

criterion_group!(benches, bench_correlogram, bench_runs_sweep);
criterion_main!(benches);
