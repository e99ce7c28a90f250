//! Microbenchmarks for the hot kernels: norm evaluation by each route,
//! the Fourier transform, exhaustive phase search, degree sweeps, and
//! cube counting.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use gowers_lab::cubes::{count_cubes, FilteredAbelianSpec};
use gowers_lab::generators::random_table;
use gowers_lab::gowers::{
    correlate_exhaustive, gowers_norm, u2_fourier, NormMethod, NormRequest, DEFAULT_NORM_BUDGET,
};
use gowers_lab::multilinear::{build_universal_system, verify_spectrum, SymForm};
use gowers_lab::{ExactTable, GroupSpec, UnitRational};

fn bench_norms(c: &mut Criterion) {
    let mut group = c.benchmark_group("gowers_norm");
    for spec in ["2,2,2", "24", "48"] {
        let g = GroupSpec::parse(spec).unwrap();
        let f = random_table(&g, 7);
        for (method, name) in [(NormMethod::Naive, "naive"), (NormMethod::Recursive, "recursive")]
        {
            group.bench_function(BenchmarkId::new(name, format!("u3/{spec}")), |b| {
                b.iter(|| {
                    gowers_norm(&NormRequest {
                        f: black_box(f.clone()),
                        k: 3,
                        method,
                        budget: DEFAULT_NORM_BUDGET,
                    })
                    .unwrap()
                })
            });
        }
        group.bench_function(BenchmarkId::new("fourier", format!("u2/{spec}")), |b| {
            b.iter(|| u2_fourier(black_box(&f)))
        });
    }
    group.finish();
}

fn bench_fourier(c: &mut Criterion) {
    let g = GroupSpec::parse("2^8").unwrap();
    let f = random_table(&g, 3);
    c.bench_function("fourier_transform/2^8", |b| {
        b.iter(|| black_box(&f).fourier_transform())
    });
}

fn bench_correlate(c: &mut Criterion) {
    let g = GroupSpec::parse("2,4").unwrap();
    let f = random_table(&g, 11);
    c.bench_function("correlate_exhaustive/2,4/deg2/den4", |b| {
        b.iter(|| correlate_exhaustive(black_box(&f), 2, 4, DEFAULT_NORM_BUDGET).unwrap())
    });
}

fn bench_degree(c: &mut Criterion) {
    let g = GroupSpec::parse("2,4").unwrap();
    let f = ExactTable::from_fn(&g, |x| {
        UnitRational::new(x.coords()[0] * x.coords()[1], 8)
    });
    c.bench_function("degree_sweep/2,4", |b| b.iter(|| black_box(&f).degree()));
}

fn bench_cubes(c: &mut Criterion) {
    let spec = FilteredAbelianSpec::parse("D2:2").unwrap();
    c.bench_function("count_cubes/D2:2/n3", |b| {
        b.iter(|| count_cubes(black_box(&spec), 3, 1 << 24).unwrap())
    });
}

fn bench_universal(c: &mut Criterion) {
    let g = GroupSpec::parse("2,2,2").unwrap();
    let b_form = SymForm::new(
        g.clone(),
        3,
        vec![(vec![0, 1, 2], UnitRational::new(1, 2))],
    )
    .unwrap();
    let sys = build_universal_system(&b_form).unwrap();
    c.bench_function("universal_spectrum/(Z2)^3/k3", |b| {
        b.iter(|| verify_spectrum(black_box(&sys)).unwrap())
    });
}

criterion_group!(
    benches,
    bench_norms,
    bench_fourier,
    bench_correlate,
    bench_degree,
    bench_cubes,
    bench_universal
);
criterion_main!(benches);
