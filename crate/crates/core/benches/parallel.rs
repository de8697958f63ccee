//! Head-to-head benchmark of the parallel and sequential Gram/embedding paths.
//!
//! Run with `cargo bench -p kernelscope-core`; add `--no-default-features` to measure
//! the build without rayon. The two paths produce bit-identical matrices (asserted in
//! the test suite), so this suite is purely about throughput.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use kernelscope_core::kernels::{KernelSpec, SpectralMeasure};
use kernelscope_core::measures::SignedMeasure;

fn gaussian_kernel(grid: usize) -> KernelSpec {
    KernelSpec::translation_invariant(SpectralMeasure::gaussian(8.0, grid).unwrap())
}

fn points(n: usize) -> Vec<f64> {
    (0..n).map(|i| -3.0 + 6.0 * i as f64 / (n - 1) as f64).collect()
}

fn bench_gram(c: &mut Criterion) {
    let mut group = c.benchmark_group("gram");
    for &n in &[16usize, 64, 128] {
        let kernel = gaussian_kernel(801);
        let pts = points(n);
        group.bench_with_input(BenchmarkId::new("parallel", n), &pts, |b, pts| {
            b.iter(|| kernel.gram(pts).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &pts, |b, pts| {
            b.iter(|| kernel.gram_sequential(pts).unwrap())
        });
    }
    group.finish();
}

fn bench_embed(c: &mut Criterion) {
    let mut group = c.benchmark_group("embed");
    group.sample_size(20);
    let kernel = gaussian_kernel(2001);
    let density = kernelscope_core::measures::GriddedDensity::sample(-5.0, 5.0, 4001, |x| {
        (-x * x).exp() * x.sin()
    })
    .unwrap();
    let mu = SignedMeasure::new(vec![], Some(density)).unwrap();
    group.bench_function("embed-4001-node-measure", |b| {
        b.iter(|| kernel.embed(&mu, 0.37))
    });
    group.finish();
}

criterion_group!(benches, bench_gram, bench_embed);
criterion_main!(benches);
