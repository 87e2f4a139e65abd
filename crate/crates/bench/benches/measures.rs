use criterion::{criterion_group, criterion_main, Criterion};

use polyinfo::builtins::{builtin, Builtin};
use polyinfo::common::{singleton_groups, wyner_common_information};
use polyinfo::dist::VariableSet;
use polyinfo::pid::pid_broja;
use polyinfo::profiles::{marginal_utility, maxent_projection};
use polyinfo::secrecy::intrinsic_mi;
use polyinfo::shannon::idiagram;

fn bench_idiagram(c: &mut Criterion) {
    let d = builtin(Builtin::Parity { n: 6 }).unwrap();
    c.bench_function("idiagram parity(6)", |b| {
        b.iter(|| idiagram(&d).unwrap())
    });
}

fn bench_ipf(c: &mut Criterion) {
    let d = builtin(Builtin::Triadic).unwrap();
    c.bench_function("maxent projection k=2 triadic", |b| {
        b.iter(|| maxent_projection(&d, 2).unwrap())
    });
}

fn bench_broja(c: &mut Criterion) {
    let d = builtin(Builtin::Dyadic).unwrap();
    let inputs = [VariableSet::of(["X"]), VariableSet::of(["Y"])];
    let output = VariableSet::of(["Z"]);
    c.bench_function("broja dyadic", |b| {
        b.iter(|| pid_broja(&d, &inputs, &output).unwrap())
    });
}

fn bench_intrinsic(c: &mut Criterion) {
    let d = builtin(Builtin::Triadic).unwrap();
    let (x, y, z) = (
        VariableSet::of(["X"]),
        VariableSet::of(["Y"]),
        VariableSet::of(["Z"]),
    );
    c.bench_function("intrinsic triadic (deterministic pass)", |b| {
        b.iter(|| intrinsic_mi(&d, &x, &y, &z, 0, 0).unwrap())
    });
}

fn bench_wyner(c: &mut Criterion) {
    let d = builtin(Builtin::Dyadic).unwrap();
    c.bench_function("wyner bracket dyadic (deterministic pass)", |b| {
        b.iter(|| wyner_common_information(&d, &singleton_groups(&d), None, 0, 0).unwrap())
    });
}

fn bench_mui(c: &mut Criterion) {
    let d = builtin(Builtin::Dyadic).unwrap();
    c.bench_function("marginal utility dyadic", |b| {
        b.iter(|| marginal_utility(&d, 32).unwrap())
    });
}

criterion_group!(
    benches,
    bench_idiagram,
    bench_ipf,
    bench_broja,
    bench_intrinsic,
    bench_wyner,
    bench_mui
);
criterion_main!(benches);
