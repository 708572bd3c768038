use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};
use qdisk_core::ncalg::Strategy;
use qdisk_core::{AlphaParam, Kernel, Scalar};

const ALPHA: AlphaParam = AlphaParam::Exact(1);

// Every kernel caches its results, so each iteration starts from a fresh one.
fn cold<R>(c: &mut Criterion, group: &str, sizes: &[u32], f: impl Fn(&Kernel<qdisk_core::Exact>, u32) -> R) {
    let mut g = c.benchmark_group(group);
    for &n in sizes {
        g.bench_function(BenchmarkId::from_parameter(n), |b| {
            b.iter_batched(Kernel::exact, |k| f(&k, n), BatchSize::SmallInput)
        });
    }
    g.finish();
}

fn scalar_arithmetic(c: &mut Criterion) {
    let a: Scalar = "(1 - q^4)/(1 - q^6)".parse().unwrap();
    let b: Scalar = "(q^2 - q^8)/(1 - q^10)".parse().unwrap();
    c.bench_function("scalar/add_mul", |bench| bench.iter(|| &(&a + &b) * &a));
}

fn normal_ordering(c: &mut Criterion) {
    let k = Kernel::exact();
    let y = k.y_algebra().clone();
    let word = [3u8, 0, 2, 1, 3, 0, 2, 1];
    let mut g = c.benchmark_group("normal_order_y8");
    g.bench_function("leftmost", |b| {
        b.iter(|| y.normal_order_with(&word, Strategy::Leftmost))
    });
    g.bench_function("rightmost", |b| {
        b.iter(|| y.normal_order_with(&word, Strategy::Rightmost))
    });
    g.finish();
}

fn qdisk(c: &mut Criterion) {
    cold(c, "qdisk", &[2, 4, 6], |k, n| k.qdisk(n, n / 2, ALPHA).unwrap());
}

fn linearization(c: &mut Criterion) {
    cold(c, "lin_table", &[1, 2, 3], |k, n| k.lin_table(n, ALPHA).unwrap());
}

fn addition(c: &mut Criterion) {
    cold(c, "addition_formula", &[1, 2], |k, n| {
        k.verify_addition(n, 1, ALPHA).unwrap()
    });
}

fn hypergroup(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify_axioms");
    g.sample_size(10);
    for n in [1u32, 2, 3] {
        g.bench_function(BenchmarkId::from_parameter(n), |b| {
            b.iter_batched(
                Kernel::exact,
                |k| k.verify_axioms(n, ALPHA).unwrap(),
                BatchSize::SmallInput,
            )
        });
    }
    g.finish();
}

criterion_group!(
    benches,
    scalar_arithmetic,
    normal_ordering,
    qdisk,
    linearization,
    addition,
    hypergroup
);
criterion_main!(benches);
