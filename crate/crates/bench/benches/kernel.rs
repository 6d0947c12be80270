use criterion::{criterion_group, criterion_main, Criterion};
use onsager_bench::commutator_input;
use onsager_core::central::{self, Route};
use onsager_core::qfield::q_int;
use onsager_core::{normal_form, rewrite, Generator};
use std::hint::black_box;

fn qfield(c: &mut Criterion) {
    let a = q_int(5);
    let b = &q_int(3) + &q_int(4);
    c.bench_function("qrat mul+div", |bch| bch.iter(|| &(black_box(&a) * black_box(&b)) / &a));
}

fn reduction(c: &mut Criterion) {
    let small = commutator_input(Generator::w(1), Generator::w(0));
    let big = commutator_input(Generator::gt(3), Generator::w(-3));
    c.bench_function("normal_form [W1,W0]", |bch| bch.iter(|| normal_form(black_box(&small))));
    c.bench_function("normal_form [Gt3,W-3]", |bch| bch.iter(|| normal_form(black_box(&big))));
}

fn suites(c: &mut Criterion) {
    let mut g = c.benchmark_group("suites");
    g.sample_size(10);
    g.bench_function("ambiguities bound 2", |bch| bch.iter(|| rewrite::check_ambiguities(black_box(2))));
    g.bench_function("Z_3 direct", |bch| bch.iter(|| central::z_n(black_box(3), Route::Direct)));
    g.finish();
}

criterion_group!(benches, qfield, reduction, suites);
criterion_main!(benches);
