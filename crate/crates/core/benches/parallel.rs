//! Default rayon pool against a one-thread pool on the data-parallel paths.
//! Build with `--no-default-features` to time the sequential fallback.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::ThreadPool;

use gensplice::verify::{run_suite, AuditConfig};
use gensplice::{canonical_rules, gs_finite, gsa_finite, FiniteLanguage, Word};

fn language(seed: u64, size: usize, max_len: usize) -> FiniteLanguage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..size)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            Word::from((0..len).map(|_| ['a', 'b', 'c'][rng.gen_range(0..3)]).collect::<String>().as_str())
        })
        .collect()
}

fn pools() -> [(&'static str, ThreadPool); 2] {
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let all = rayon::ThreadPoolBuilder::new().build().unwrap();
    [("1-thread", one), ("default", all)]
}

fn bench(c: &mut Criterion) {
    let (l1, l2) = (language(1, 120, 8), language(2, 120, 8));
    let (s1, s2) = (language(3, 25, 5), language(4, 25, 5));
    let rules = canonical_rules(&s1, &s2);
    let cfg = AuditConfig::with_max_len(7);

    let mut group = c.benchmark_group("parallel");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_with_input(BenchmarkId::new("gsa_finite", name), &(), |b, _| {
            b.iter(|| pool.install(|| black_box(gsa_finite(&l1, &l2))))
        });
        group.bench_with_input(BenchmarkId::new("gs_finite", name), &(), |b, _| {
            b.iter(|| pool.install(|| black_box(gs_finite(&s1, &s2, &rules))))
        });
        group.bench_with_input(BenchmarkId::new("run_suite", name), &(), |b, _| {
            b.iter(|| pool.install(|| black_box(run_suite(&cfg).unwrap())))
        });
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
