use std::hint::black_box;

use catfree_core::decomp::{classify_gl2_aut, recover_matrix_aut, MatrixSemigroupAuto};
use catfree_core::endo::{dieudonne_case1, CharacterMap};
use catfree_core::lie::{bracket, bracket_in_field, FreeLie};
use catfree_core::module::{recover_ring_aut, CategoryAutoDescriptor};
use catfree_core::verify::{run_suite, SuiteConfig};
use catfree_core::{Lcg64, Matrix, Ring};
use criterion::{criterion_group, criterion_main, Criterion};

fn ring(s: &str) -> Ring {
    s.parse().unwrap()
}

fn brackets(c: &mut Criterion) {
    let lie = FreeLie::xy(&ring("gf(13)")).unwrap();
    let mut rng = Lcg64::new(1);
    let pairs: Vec<_> =
        (0..32).map(|_| (lie.random_element(&mut rng, 5, 4), lie.random_element(&mut rng, 5, 4))).collect();
    c.bench_function("bracket/integer_constants", |b| {
        b.iter(|| pairs.iter().map(|(x, y)| bracket(black_box(x), y).unwrap().len()).sum::<usize>())
    });
    c.bench_function("bracket/field_straightening", |b| {
        b.iter(|| pairs.iter().map(|(x, y)| bracket_in_field(black_box(x), y).unwrap().len()).sum::<usize>())
    });
}

fn automorphisms(c: &mut Criterion) {
    for s in ["gf(27)", "m2(gf(2))", "z(8)"] {
        let k = ring(s);
        c.bench_function(&format!("automorphisms/{s}"), |b| b.iter(|| black_box(&k).automorphisms().unwrap().len()));
    }
    let k = ring("gf(9)");
    let mut rng = Lcg64::new(2);
    let phi = CategoryAutoDescriptor::new(&k, k.frobenius(1).unwrap()).with_random_twists(&mut rng, 2);
    c.bench_function("recover_ring_aut/gf(9)", |b| b.iter(|| recover_ring_aut(black_box(&phi)).unwrap().sigma));
}

fn recoveries(c: &mut Criterion) {
    let k = ring("gf(4)");
    let mut rng = Lcg64::new(3);
    let phi = Matrix::random_invertible(&k, &mut rng, 2);
    let f = MatrixSemigroupAuto::conjugation(&k, k.frobenius(1).unwrap(), phi).unwrap();
    c.bench_function("recover_matrix_aut/m2(gf(4))", |b| {
        b.iter(|| recover_matrix_aut(black_box(&f), &mut Lcg64::new(0)).unwrap().verified_on)
    });

    let k = ring("gf(5)");
    let (chi, tau, id) = (CharacterMap::det(&k), Matrix::random_invertible(&k, &mut rng, 2), k.identity_aut());
    let s = move |b: &Matrix| dieudonne_case1(&chi, &tau, &id, b).unwrap();
    c.bench_function("classify_gl2_aut/gf(5)", |b| {
        b.iter(|| classify_gl2_aut(&k, black_box(&s), &mut Lcg64::new(0)).unwrap().multiplicity)
    });
}

fn battery(c: &mut Criterion) {
    let cfg = SuiteConfig::default();
    let mut group = c.benchmark_group("battery");
    group.sample_size(10);
    group.bench_function("verify_all", |b| b.iter(|| run_suite(black_box(&cfg)).unwrap().len()));
    group.finish();
}

criterion_group!(benches, brackets, automorphisms, recoveries, battery);
criterion_main!(benches);
