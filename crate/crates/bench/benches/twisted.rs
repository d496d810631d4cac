//! The Möbius-weighted twisted sum: divisor double sum against the local
//! factor product.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use primrep::twisted_sums::{mobius_weighted_sum_bruteforce, mobius_weighted_sum_closed, mobius_weighted_sum_real};
use primrep::DirichletCharacter;

fn chars(psi: &str, phi: &str) -> (DirichletCharacter, DirichletCharacter) {
    (psi.parse().unwrap(), phi.parse().unwrap())
}

fn sums(c: &mut Criterion) {
    // highly composite n, where the double sum is at its worst
    let ns = [720_720u64, 97_297_200];
    let cases = [("real", "kron:-4", "kron:8"), ("complex", "mod:7:1", "mod:9:1")];
    let mut group = c.benchmark_group("Möbius-weighted sum");
    for (name, psi, phi) in cases {
        let (psi, phi) = chars(psi, phi);
        for n in ns {
            let id = format!("{name}/{n}");
            group.bench_with_input(BenchmarkId::new("brute", &id), &n, |b, &n| {
                b.iter(|| mobius_weighted_sum_bruteforce(&psi, &phi, 2, black_box(n)).unwrap())
            });
            group.bench_with_input(BenchmarkId::new("closed", &id), &n, |b, &n| {
                b.iter(|| mobius_weighted_sum_closed(&psi, &phi, 2, black_box(n)).unwrap())
            });
            if psi.is_real() {
                group.bench_with_input(BenchmarkId::new("real", &id), &n, |b, &n| {
                    b.iter(|| mobius_weighted_sum_real(&psi, &phi, 2, black_box(n)).unwrap())
                });
            }
        }
    }
    group.finish();
}

criterion_group!(benches, sums);
criterion_main!(benches);
