use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use lamcore::ball::{beta, beta_inv, ScaledPair};
use lamcore::core_complex::build_core;
use lamcore::decomposition::decompose_pair;
use lamcore::lamination::{curve_intersection, WeightedMulticurve};
use lamcore::mcg::{penner_word, stretch_estimate, MappingClass};
use lamcore::sample::{random_curve, random_lamination, random_vector, rng};
use lamcore::surface::surface;

fn pairs(genus: usize, n: usize) -> Vec<(WeightedMulticurve, WeightedMulticurve)> {
    let mut r = rng(17);
    (0..n)
        .map(|_| {
            (
                random_lamination(genus, 4, 8, &mut r),
                random_lamination(genus, 4, 8, &mut r),
            )
        })
        .collect()
}

fn intersection(c: &mut Criterion) {
    let mut group = c.benchmark_group("curve_intersection");
    for g in [2, 3] {
        let mut r = rng(3);
        let cs: Vec<_> = (0..16).map(|_| random_curve(g, 6, &mut r)).collect();
        group.bench_with_input(BenchmarkId::from_parameter(g), &cs, |b, cs| {
            b.iter(|| {
                let mut total = 0;
                for w in cs.windows(2) {
                    total += curve_intersection(black_box(&w[0]), black_box(&w[1]));
                }
                total
            })
        });
    }
    group.finish();
}

fn decomposition_and_core(c: &mut Criterion) {
    let mut group = c.benchmark_group("pair");
    group.sample_size(20);
    for g in [2, 3] {
        let ps = pairs(g, 8);
        group.bench_with_input(BenchmarkId::new("decompose", g), &ps, |b, ps| {
            b.iter(|| {
                ps.iter()
                    .map(|(x, y)| decompose_pair(x, y).unwrap().curve_system.len())
                    .sum::<usize>()
            })
        });
        group.bench_with_input(BenchmarkId::new("core", g), &ps, |b, ps| {
            b.iter(|| {
                ps.iter()
                    .map(|(x, y)| build_core(x, y).unwrap().flat_pieces.len())
                    .sum::<usize>()
            })
        });
    }
    group.finish();
}

fn mapping_classes(c: &mut Criterion) {
    let chain = surface(2).unwrap().chain();
    let f = MappingClass::parse(2, &penner_word(2)).unwrap();
    c.bench_function("stretch_estimate/penner", |b| {
        b.iter(|| stretch_estimate(black_box(&f), &chain[0], 12).unwrap())
    });
}

fn ball(c: &mut Criterion) {
    let mut r = rng(5);
    let vs: Vec<ScaledPair> = (0..32)
        .map(|_| {
            ScaledPair::new(random_vector(12, 9, &mut r), random_vector(12, 9, &mut r)).unwrap()
        })
        .collect();
    c.bench_function("beta_roundtrip/g3", |b| {
        b.iter(|| {
            vs.iter()
                .filter(|v| beta_inv(&beta(v)).unwrap() == **v)
                .count()
        })
    });
}

criterion_group!(
    benches,
    intersection,
    decomposition_and_core,
    mapping_classes,
    ball
);
criterion_main!(benches);
