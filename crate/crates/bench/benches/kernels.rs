use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use isubdiv_bench::{blowup_instance, cycle_instance, incidence};
use isubdiv_core::connectivity::vertex_connectivity;
use isubdiv_core::extremal::{max_arc, ProjectivePlane};
use isubdiv_core::invariants::{degeneracy_order, girth};
use isubdiv_core::pipeline::{main_theorem, Profile, RunOptions};
use isubdiv_core::subdivision::{clique_pattern, find_induced_subdivision, verify};
use isubdiv_core::Graph;

fn invariants(c: &mut Criterion) {
    let blowup = blowup_instance();
    let pg = incidence(5);
    c.bench_function("girth/blowup", |b| b.iter(|| girth(black_box(&blowup))));
    c.bench_function("degeneracy/blowup", |b| {
        b.iter(|| degeneracy_order(black_box(&blowup)))
    });
    c.bench_function("connectivity/pg25", |b| {
        b.iter(|| vertex_connectivity(black_box(&pg)))
    });
}

fn search(c: &mut Criterion) {
    let petersen = Graph::petersen();
    let k4 = clique_pattern(4);
    c.bench_function("find/petersen-k4", |b| {
        b.iter(|| find_induced_subdivision(black_box(&petersen), &k4, u64::MAX, false))
    });
    let cert = find_induced_subdivision(&petersen, &k4, u64::MAX, false)
        .unwrap()
        .certificate()
        .cloned()
        .unwrap();
    c.bench_function("verify/petersen-k4", |b| {
        b.iter(|| verify(black_box(&petersen), &cert))
    });
    let plane = ProjectivePlane::new(7).unwrap();
    c.bench_function("arc/pg27-none", |b| {
        b.iter(|| max_arc(black_box(&plane), 9, u64::MAX, true))
    });
}

fn pipeline(c: &mut Criterion) {
    let g = cycle_instance();
    let mut group = c.benchmark_group("pipeline");
    group.sample_size(10);
    group.bench_function("main-theorem/hub-cycle", |b| {
        b.iter(|| main_theorem(black_box(&g), 4, &Profile::desk(), RunOptions::new(0, 30)))
    });
    group.finish();
}

criterion_group!(benches, invariants, search, pipeline);
criterion_main!(benches);
