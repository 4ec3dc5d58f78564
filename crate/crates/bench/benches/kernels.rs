use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use saddle_core::perturb::{jet_saddle_values, linear_saddle_values};
use saddle_core::saddle::{saddle_values_integral, saddle_values_nf};
use saddle_core::witness::{build_matrix_a, build_u_symbolic, choose_g, f_poly, rank_exact, rank_symbolic, mu_candidates};
use saddle_core::{resonance_data, synth_theorem1, theorem3_certificate, BivarPoly, EpsForm, PerturbFamily, SaddleSystem, SynthOptions};

fn cubic() -> SaddleSystem<saddle_core::Rational> {
    let px = BivarPoly::from_ints(&[(2, 0, 1, 1), (1, 1, -2, 1), (3, 0, 1, 3), (0, 3, 1, 1)]);
    let qy = BivarPoly::from_ints(&[(0, 2, 1, 2), (2, 1, 3, 1), (1, 2, -1, 1)]);
    SaddleSystem::new(1, 1, px, qy).unwrap()
}

fn engines(c: &mut Criterion) {
    let sys = cubic();
    let mut g = c.benchmark_group("saddle_values");
    for k in [4u32, 8, 12] {
        g.bench_with_input(BenchmarkId::new("normal_form", k), &k, |b, &k| b.iter(|| saddle_values_nf(black_box(&sys), k).unwrap()));
        g.bench_with_input(BenchmarkId::new("first_integral", k), &k, |b, &k| {
            b.iter(|| saddle_values_integral(black_box(&sys), k).unwrap())
        });
    }
    g.finish();
}

fn perturbation(c: &mut Criterion) {
    let unit = BivarPoly::from_ints(&[(1, 0, 1, 1), (0, 2, 2, 1)]);
    let fam = PerturbFamily::new(1, 2, cubic().nonlin_x, cubic().nonlin_y, Some(unit), EpsForm::Rescaled).unwrap();
    let mut g = c.benchmark_group("perturb");
    g.bench_function("extraction_k8", |b| b.iter(|| linear_saddle_values(black_box(&fam), 8).unwrap()));
    g.bench_function("jet_engine_k8_j1", |b| b.iter(|| jet_saddle_values(black_box(&fam), 8, 1).unwrap()));
    g.finish();
}

fn matrices(c: &mut Criterion) {
    let mut g = c.benchmark_group("matrix");
    g.sample_size(10);
    for (p, q, n) in [(1u64, 1u64, 6u64), (1, 2, 9), (1, 1, 10)] {
        let rd = resonance_data(p, q, n).unwrap();
        let f = f_poly(&rd).unwrap();
        let id = format!("{p},{q},{n}");
        g.bench_function(BenchmarkId::new("build_at_f", &id), |b| b.iter(|| build_matrix_a(black_box(&rd), &f).unwrap()));
        let a = build_matrix_a(&rd, &f).unwrap();
        g.bench_function(BenchmarkId::new("rank_exact", &id), |b| b.iter(|| rank_exact(black_box(&a))));
        if let Some(gp) = choose_g(&rd).unwrap().g {
            let sym = build_matrix_a(&rd, &build_u_symbolic(&rd, &gp).unwrap()).unwrap();
            let mus = mu_candidates(10);
            g.bench_function(BenchmarkId::new("rank_symbolic", &id), |b| b.iter(|| rank_symbolic(black_box(&sym), &mus)));
        }
    }
    g.finish();
}

fn witnesses(c: &mut Criterion) {
    let mut g = c.benchmark_group("witness");
    g.sample_size(10);
    g.bench_function("synth_1_1_6", |b| b.iter(|| synth_theorem1(1, 1, 6, &SynthOptions::default()).unwrap()));
    g.bench_function("certificate_1_1_10", |b| b.iter(|| theorem3_certificate(1, 1, 10).unwrap()));
    g.finish();
}

criterion_group!(benches, engines, perturbation, matrices, witnesses);
criterion_main!(benches);
