use criterion::{black_box, criterion_group, criterion_main, Criterion};
use floerveer::analysis::{analyze, AnalysisConfig};
use floerveer::build_homology;
use floerveer::heegaard::build_diagram;
use floerveer::poly::GcdBudget;
use floerveer::relations::{antiveering_polynomial, build_cocycle, taut_polynomial};
use floerveer::states::{enumerate_states_filter, enumerate_states_multiloop, StateBudget};
use floerveer_bench::{fixture, FIXTURES};

fn states(c: &mut Criterion) {
    let mut g = c.benchmark_group("states");
    for name in FIXTURES {
        let vbs = fixture(name);
        g.bench_function(format!("multiloop/{name}"), |b| {
            b.iter(|| enumerate_states_multiloop(black_box(&vbs), StateBudget::default()).unwrap())
        });
        g.bench_function(format!("filter/{name}"), |b| {
            b.iter(|| enumerate_states_filter(black_box(&vbs), StateBudget::default()).unwrap())
        });
    }
    g.finish();
}

fn polynomials(c: &mut Criterion) {
    let mut g = c.benchmark_group("polynomials");
    for name in FIXTURES {
        let vbs = fixture(name);
        let cocycle = build_cocycle(&build_homology(&vbs));
        g.bench_function(format!("antiveering/{name}"), |b| {
            b.iter(|| antiveering_polynomial(black_box(&vbs), &cocycle).unwrap())
        });
        g.bench_function(format!("taut/{name}"), |b| {
            b.iter(|| taut_polynomial(black_box(&vbs), &cocycle, GcdBudget::default()).unwrap())
        });
    }
    g.finish();
}

fn pipeline(c: &mut Criterion) {
    let mut g = c.benchmark_group("pipeline");
    g.sample_size(10);
    for name in FIXTURES {
        let vbs = fixture(name);
        g.bench_function(format!("diagram/{name}"), |b| {
            b.iter(|| build_diagram(black_box(&vbs)).unwrap())
        });
        g.bench_function(format!("analyze/{name}"), |b| {
            b.iter(|| analyze(black_box(&vbs), &AnalysisConfig::default()))
        });
    }
    g.finish();
}

criterion_group!(benches, states, polynomials, pipeline);
criterion_main!(benches);
