use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use quadkit::fixtures::{example_b, seeded_polynomial};
use quadkit::oracle::{synthesize_one_aux_with, verify_perfect_with};
use quadkit::partition::{quadratize_n_with, QuadratizeOptions};
use quadkit::{baselines, Exec, Polynomial, Tolerance};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn synthesizer(c: &mut Criterion) {
    let f = seeded_polynomial(4, 4, 1.0, 3);
    let mut g = c.benchmark_group("synthesize_one_aux");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &f, |bch, f| {
            bch.iter(|| synthesize_one_aux_with(black_box(f), Tolerance::default(), exec))
        });
    }
    g.finish();
}

fn verifier(c: &mut Criterion) {
    // pairwise penalties couple auxiliaries, so this exercises full enumeration
    let p = example_b(4);
    let q = baselines::rosenberg(&p, None).unwrap().quadratic;
    let mut g = c.benchmark_group("verify_perfect");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &(&p, &q), |bch, (p, q)| {
            bch.iter(|| verify_perfect_with(black_box(p), black_box(q), Tolerance::default(), exec))
        });
    }
    g.finish();
}

fn groups(c: &mut Criterion) {
    let polys: Vec<Polynomial> = (0..32).map(|s| seeded_polynomial(8, 4, 0.3, s)).collect();
    let mut g = c.benchmark_group("quadratize_n");
    for (name, exec) in MODES {
        let opts = QuadratizeOptions {
            exec,
            ..Default::default()
        };
        g.bench_function(name, |bch| {
            bch.iter(|| {
                for p in &polys {
                    black_box(quadratize_n_with(p, &opts).unwrap());
                }
            })
        });
    }
    g.finish();
}

criterion_group!(benches, synthesizer, verifier, groups);
criterion_main!(benches);
