use bregkern_bench::{gaussian_pair, histogram_points, spd_pair};
use bregkern_core::manifolds::GaussianCumulant;
use bregkern_core::{
    bregman_divergence, fenchel_young_divergence, inductive_midpoint_mean, lambert_w,
    skew_burbea_rao_barycenter, BregmanManifold, DualCoordinate,
};
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;
use std::sync::Arc;

fn divergences(c: &mut Criterion) {
    let (g, p, q) = gaussian_pair();
    let m = g.manifold();
    c.bench_function("bregman_divergence_gaussian2", |b| {
        b.iter(|| bregman_divergence(m, black_box(&p), black_box(&q), DualCoordinate::Primal))
    });
    c.bench_function("fenchel_young_gaussian2", |b| {
        b.iter(|| fenchel_young_divergence(m, black_box(&p), black_box(&q)))
    });
}

fn barycenters(c: &mut Criterion) {
    let (mix, points) = histogram_points(16, 4);
    let weights = vec![1.0; points.len()];
    c.bench_function("cccp_barycenter_mixture16", |b| {
        b.iter(|| {
            skew_burbea_rao_barycenter(
                mix.manifold(),
                black_box(&points),
                &weights,
                0.5,
                DualCoordinate::Primal,
            )
        })
    });

    let (psd, pa, pb) = spd_pair();
    c.bench_function("inductive_mean_psd3", |b| {
        b.iter(|| inductive_midpoint_mean(psd.manifold(), black_box(&pa), black_box(&pb), 7))
    });
}

fn scalar_kernels(c: &mut Criterion) {
    c.bench_function("lambert_w_both_branches", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for i in 1..=32 {
                let x = -0.3678 * i as f64 / 33.0;
                acc += lambert_w(0, black_box(x)).unwrap();
                acc += lambert_w(-1, black_box(x)).unwrap();
            }
            acc
        })
    });

    // Newton-based gradient inversion: a manifold built from the cumulant
    // alone has no closed-form dual gradient to fall back on.
    let m = BregmanManifold::new(Arc::new(GaussianCumulant { d: 2 }), None).unwrap();
    let pot = m.chart_potential(DualCoordinate::Primal);
    let theta = vec![0.8, -0.4, -0.6, 0.2, -0.5];
    let eta = pot.gradient(&theta).unwrap();
    c.bench_function("newton_gradient_inversion_gaussian2", |b| {
        b.iter(|| pot.invert_gradient(black_box(&eta)))
    });
}

criterion_group!(benches, divergences, barycenters, scalar_kernels);
criterion_main!(benches);
