use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use phigamma::bounded::{vj_table, BoundedOptions};
use phigamma::wach::{WachContext, WittRing};
use phigamma::RankOneModule;
use phigamma_bench::{dense_unit, ring};

fn series_arithmetic(c: &mut Criterion) {
    let (field, _) = ring(5, 2);
    let a = dense_unit(&field, 400, 1);
    let b = dense_unit(&field, 400, 2);
    c.bench_function("series mul order 400", |bench| {
        bench.iter(|| black_box(&a) * black_box(&b))
    });
    c.bench_function("series inv order 400", |bench| {
        bench.iter(|| black_box(&a).inv().unwrap())
    });
}

fn gamma_action(c: &mut Criterion) {
    let (_, tate) = ring(5, 2);
    let eta = tate.eta();
    c.bench_function("lambda_eta p=5 f=2", |bench| {
        bench.iter(|| {
            let (_, fresh) = ring(5, 2);
            fresh.lambda(black_box(&eta), tate.order()).unwrap()
        })
    });
}

fn bounded_table(c: &mut Criterion) {
    let (field, tate) = ring(5, 2);
    let n = phigamma::rankone::twisted_digit_sum(&[1, 2], 5, 0);
    let m = RankOneModule::normal_form(&field, field.one(), n).unwrap();
    let mut group = c.benchmark_group("vj");
    group.sample_size(10);
    group.bench_function("vj_table p=5 f=2 c=(1,2)", |bench| {
        bench.iter(|| vj_table(&tate, &m, tate.precision().tail_floor, BoundedOptions::default()).unwrap())
    });
    group.finish();
}

fn wach_build(c: &mut Criterion) {
    let (field, tate) = ring(3, 2);
    let w = WittRing::new(&field, 3).unwrap();
    let ctx = WachContext::new(&w, 2, tate.order()).unwrap();
    let gens = tate.generators();
    let unit = w.teichmuller(field.primitive());
    let mut group = c.benchmark_group("wach");
    group.sample_size(10);
    group.bench_function("rank-one Wach module p=3 f=2 c=(1,2)", |bench| {
        bench.iter(|| ctx.build_rank1(black_box(&unit), &[1, 2], &gens).unwrap())
    });
    group.finish();
}

criterion_group!(benches, series_arithmetic, gamma_action, bounded_table, wach_build);
criterion_main!(benches);
