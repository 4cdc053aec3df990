use criterion::{black_box, criterion_group, criterion_main, Criterion};
use spinwreath_core::chartable::build_table;
use spinwreath_core::checks::isometry_check;
use spinwreath_core::fock::FockSpace;
use spinwreath_core::lattice::F2Data;
use spinwreath_core::oracle::enumerate_classes_bruteforce;
use spinwreath_core::{builtin, SpinAlgebra, TwistedSpace, TwistedVector, VirtualChar};

fn lattice(c: &mut Criterion) {
    let g = builtin("cyclic:6").unwrap().data;
    let xi = g.mckay_xi(None).unwrap();
    c.bench_function("f2 data cyclic(6) mckay", |b| b.iter(|| F2Data::build(black_box(&g), &xi).unwrap()));
}

fn fock(c: &mut Criterion) {
    let g = builtin("cyclic:3").unwrap().data;
    let space = FockSpace::standard(&g);
    let gamma = g.basis(1);
    c.bench_function("q series to 12, cyclic(3)", |b| b.iter(|| space.q_series(black_box(&gamma), 12).unwrap()));
}

fn vertex(c: &mut Criterion) {
    let g = builtin("cyclic:2").unwrap().data;
    let xi = g.mckay_xi(None).unwrap();
    let space = TwistedSpace::new(g, xi).unwrap();
    let alpha = space.unit(1);
    c.bench_function("X_{-3} X_{-1} on vacuum, cyclic(2) mckay", |b| {
        b.iter(|| {
            let v = space.x_component(-1, &alpha, &TwistedVector::vacuum(0));
            space.x_component(-3, black_box(&alpha), &v)
        })
    });
}

fn tables(c: &mut Criterion) {
    let mut group = c.benchmark_group("character table");
    group.sample_size(10);
    let trivial = builtin("trivial").unwrap().data;
    group.bench_function("trivial n=5", |b| b.iter(|| build_table(black_box(&trivial), 5, false).unwrap()));
    let c2 = builtin("cyclic:2").unwrap().data;
    group.bench_function("cyclic(2) n=3 with checks", |b| b.iter(|| build_table(black_box(&c2), 3, true).unwrap()));
    group.finish();
}

fn class_functions(c: &mut Criterion) {
    let mut group = c.benchmark_group("class functions");
    group.sample_size(10);
    let g = builtin("cyclic:3").unwrap().data;
    let alg = SpinAlgebra::new(g.clone());
    let xi = VirtualChar::standard(3);
    group.bench_function("isometry cyclic(3) n<=5", |b| b.iter(|| isometry_check(&alg, black_box(&xi), 5)));
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    let b2 = builtin("cyclic:2").unwrap();
    group.bench_function("classes cyclic(2) n=3", |b| b.iter(|| enumerate_classes_bruteforce(black_box(&b2), 3).unwrap()));
    group.finish();
}

criterion_group!(kernels, lattice, fock, vertex, tables, class_functions, oracle);
criterion_main!(kernels);
