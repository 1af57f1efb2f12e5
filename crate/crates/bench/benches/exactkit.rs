use std::sync::Arc;

use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use exactkit::abgrp::{smith_normal_form, Int, IntMatrix};
use exactkit::bimod::Bimodule;
use exactkit::cat::{exact_sequences, EnumOrder, DEFAULT_BUDGET};
use exactkit::kzero::{compare_k0, grothendieck_group};
use exactkit::model::{build_free_module_category, FiniteRing};
use exactkit::semidirect::SemidirectCat;

fn random_matrix(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> IntMatrix {
    let data = (0..n * n).map(|_| Int::from(rng.gen_range(-bound..=bound))).collect();
    IntMatrix::from_row_major(n, n, data).unwrap()
}

fn snf(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for (n, bound) in [(8, 9), (16, 9), (12, 1_000_000_000_000)] {
        c.bench_function(&format!("snf {n}x{n} |a|<={bound}"), |b| {
            b.iter_batched(|| random_matrix(&mut rng, n, bound), |m| smith_normal_form(black_box(&m)), BatchSize::SmallInput)
        });
    }
}

fn z4_semidirect() -> SemidirectCat {
    let base = build_free_module_category(FiniteRing::zn(4).unwrap(), 2).unwrap();
    let m = Arc::new(Bimodule::hom_tensor(&base, 2).unwrap());
    SemidirectCat::new(base.exact(), m).unwrap()
}

fn enumeration(c: &mut Criterion) {
    let base = build_free_module_category(FiniteRing::zn(4).unwrap(), 2).unwrap();
    let e = base.exact();
    c.bench_function("exact sequences Z/4 rank<=2", |b| {
        b.iter(|| exact_sequences(e.as_ref(), EnumOrder::MonoFirst, DEFAULT_BUDGET).unwrap())
    });
    let sd = z4_semidirect();
    let mut g = c.benchmark_group("semidirect");
    g.sample_size(10);
    g.bench_function("exact sequences Z/4 ⋉ Hom⊗Z/2", |b| {
        b.iter(|| exact_sequences(&sd, EnumOrder::MonoFirst, DEFAULT_BUDGET).unwrap())
    });
    g.finish();
}

fn k0(c: &mut Criterion) {
    let base = build_free_module_category(FiniteRing::zn(4).unwrap(), 2).unwrap();
    let e = base.exact();
    c.bench_function("K0 Z/4 rank<=2", |b| {
        b.iter(|| grothendieck_group(e.as_ref(), EnumOrder::MonoFirst, DEFAULT_BUDGET).unwrap())
    });
    let sd = z4_semidirect();
    let mut g = c.benchmark_group("semidirect");
    g.sample_size(10);
    g.bench_function("compare K0", |b| b.iter(|| compare_k0(&sd, EnumOrder::MonoFirst, DEFAULT_BUDGET).unwrap()));
    g.finish();
}

criterion_group!(benches, snf, enumeration, k0);
criterion_main!(benches);
