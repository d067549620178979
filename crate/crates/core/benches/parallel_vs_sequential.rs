use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use geodrg::arrays::parse_array;
use geodrg::classify::enumerate_families;
use geodrg::graphs::{self, check_drg, delsarte_cover, find_claw, NamedLcf};
use geodrg::Execution;

const POLICIES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn graph_kernels(c: &mut Criterion) {
    let (shifts, repeats) = NamedLcf::Foster.shifts();
    let witnesses = [
        ("H(3,5)", graphs::hamming(3, 5).unwrap()),
        ("J(8,3)", graphs::johnson(8, 3).unwrap()),
        ("foster", graphs::lcf(shifts, repeats).unwrap()),
    ];

    let mut group = c.benchmark_group("check_drg");
    for (name, g) in &witnesses {
        for (policy, exec) in POLICIES {
            group.bench_with_input(BenchmarkId::new(policy, name), g, |b, g| {
                b.iter(|| check_drg(black_box(g), exec).unwrap())
            });
        }
    }
    group.finish();

    let mut group = c.benchmark_group("find_claw");
    for (name, g) in &witnesses {
        for (policy, exec) in POLICIES {
            group.bench_with_input(BenchmarkId::new(policy, name), g, |b, g| {
                b.iter(|| find_claw(black_box(g), 4, exec))
            });
        }
    }
    group.finish();

    let mut group = c.benchmark_group("delsarte_cover");
    for (name, g) in &witnesses[..2] {
        let arr = check_drg(g, Execution::Sequential).unwrap();
        for (policy, exec) in POLICIES {
            group.bench_with_input(BenchmarkId::new(policy, name), g, |b, g| {
                b.iter(|| delsarte_cover(black_box(g), &arr, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn family_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_families");
    group.sample_size(10);
    for (policy, exec) in POLICIES {
        group.bench_function(BenchmarkId::new(policy, "k<=60"), |b| {
            b.iter(|| enumerate_families(black_box(60), 8, exec))
        });
    }
    group.finish();

    let arr = parse_array("{189,128,45,1;1,9,128,189}").unwrap();
    c.bench_function("ruleout", |b| {
        b.iter(|| geodrg::claws::ruleout(black_box(&arr)))
    });
}

criterion_group!(benches, graph_kernels, family_sweep);
criterion_main!(benches);
