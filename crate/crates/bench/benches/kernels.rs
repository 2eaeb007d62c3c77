use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use decoherence_bench::{cat_density, packet_density, tunnel_density};
use decoherence_core::evolution::{evolve_eigenbasis, evolve_free_momentum};
use decoherence_core::numerics::{airy_ai, airy_roots};
use decoherence_core::observables::{current_density, position_profile_momentum};
use decoherence_core::MilburnParams;

fn airy(c: &mut Criterion) {
    let zs: Vec<f64> = (0..1000).map(|i| -50.0 + 0.1 * i as f64).collect();
    c.bench_function("airy_ai/1000 points on [-50, 50]", |b| {
        b.iter(|| zs.iter().map(|&z| airy_ai(black_box(z)).unwrap()).sum::<f64>())
    });
    c.bench_function("airy_roots/50", |b| b.iter(|| airy_roots(black_box(50)).unwrap()));
}

fn free_evolution(c: &mut Criterion) {
    let rho0 = cat_density().unwrap();
    let params = MilburnParams::first_order(0.5).unwrap();
    let xs: Vec<f64> = (0..401).map(|i| -20.0 + 0.1 * i as f64).collect();
    c.bench_function("evolve_free_momentum/640", |b| {
        b.iter(|| evolve_free_momentum(black_box(&rho0), 5.0, &params).unwrap())
    });
    let rho = evolve_free_momentum(&rho0, 5.0, &params).unwrap();
    c.bench_function("position_profile/640x401", |b| {
        b.iter(|| position_profile_momentum(black_box(&rho), &xs).unwrap())
    });
}

fn eigenbasis(c: &mut Criterion) {
    let mut group = c.benchmark_group("evolve_eigenbasis");
    for n in [100, 400] {
        let rho0 = tunnel_density(n).unwrap();
        let params = MilburnParams::first_order(0.5).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &rho0, |b, rho0| {
            b.iter(|| evolve_eigenbasis(rho0, black_box(10.0), &params).unwrap())
        });
    }
    group.finish();
}

fn current(c: &mut Criterion) {
    let rho0 = packet_density().unwrap();
    let params = MilburnParams::first_order(0.05).unwrap();
    c.bench_function("current_density/640", |b| {
        b.iter(|| current_density(black_box(&rho0), 0.0, 5.0, &params).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = airy, free_evolution, eigenbasis, current
}
criterion_main!(benches);
