use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use grathz_core::constants::angular_frequency;
use grathz_core::{
    find_mode, intraband_conductivity, resonance_frequency, DipoleGeometry, GrapheneSheet,
    PresetGeometry, SolverOptions, StackKind,
};

fn conductivity(c: &mut Criterion) {
    let sheet = GrapheneSheet::at_room_temperature(0.6, 1e-12).unwrap();
    let omega = angular_frequency(1e12);
    c.bench_function("intraband_conductivity", |b| {
        b.iter(|| intraband_conductivity(black_box(&sheet), black_box(omega)).unwrap())
    });
}

fn modes(c: &mut Criterion) {
    let opts = SolverOptions::default();
    let sheet = GrapheneSheet::at_room_temperature(0.4, 0.6e-12).unwrap();
    let omega = angular_frequency(5e12);
    let mut group = c.benchmark_group("find_mode");
    for kind in [StackKind::G, StackKind::H1G, StackKind::H2G] {
        let stack = PresetGeometry::default().build(kind, sheet).unwrap();
        group.bench_function(kind.to_string(), |b| {
            b.iter(|| find_mode(black_box(&stack), omega, None, &opts).unwrap())
        });
    }
    group.finish();
}

fn resonance(c: &mut Criterion) {
    let opts = SolverOptions::default();
    let dipole = DipoleGeometry::new(8e-6, 20e-6, 3e-6, 3.8).unwrap();
    let sheet = GrapheneSheet::at_room_temperature(0.6, 1e-12).unwrap();
    c.bench_function("resonance_frequency", |b| {
        b.iter(|| resonance_frequency(black_box(&dipole), &sheet, &opts).unwrap())
    });
}

criterion_group!(benches, conductivity, modes, resonance);
criterion_main!(benches);
