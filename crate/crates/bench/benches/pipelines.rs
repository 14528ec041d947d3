//! Benchmarks for the hot paths: the per-class pipeline, lattice point
//! enumeration and character table computation.

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use eqehrhart::gallery::{self, HypercubeGroup};
use eqehrhart::lattice_group::character_table;
use eqehrhart::EquivariantContext;

fn bench_hexagon_pipeline(c: &mut Criterion) {
    c.bench_function("hexagon context and hstar", |b| {
        b.iter(|| {
            let inst = gallery::hexagon_z6();
            let ctx = EquivariantContext::new(inst.polytope, inst.group).unwrap();
            black_box(ctx.equivariant_hstar())
        })
    });
}

fn bench_hypercube_context(c: &mut Criterion) {
    c.bench_function("hypercube d=3 context", |b| {
        b.iter(|| {
            let inst = gallery::hypercube_instance(3, HypercubeGroup::SymD);
            black_box(EquivariantContext::new(inst.polytope, inst.group).unwrap())
        })
    });
}

fn bench_lattice_points(c: &mut Criterion) {
    let p = gallery::cross_family(1, 3).polytope;
    c.bench_function("cross-2-3 lattice points of 12P", |b| {
        b.iter(|| black_box(p.count_lattice_points(12)))
    });
}

fn bench_character_table(c: &mut Criterion) {
    let group = gallery::hypercube_instance(4, HypercubeGroup::SymD).group;
    c.bench_function("Sym_4 character table", |b| {
        b.iter(|| black_box(character_table(&group).unwrap()))
    });
}

criterion_group!(
    benches,
    bench_hexagon_pipeline,
    bench_hypercube_context,
    bench_lattice_points,
    bench_character_table
);
criterion_main!(benches);
