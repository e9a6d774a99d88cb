use criterion::{BenchmarkId, Criterion};
use hflcheck::game::{small_progress_measures, zielonka};
use hflcheck_bench::random_games;

const SIZES: [usize; 3] = [16, 64, 256];

pub fn bench_zielonka(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve/zielonka");
    for n in SIZES {
        let games = random_games(n, 8, 6);
        g.bench_with_input(BenchmarkId::from_parameter(n), &games, |b, games| {
            b.iter(|| games.iter().map(zielonka).count())
        });
    }
    g.finish();
}

pub fn bench_spm(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve/spm");
    for n in SIZES {
        let games = random_games(n, 8, 6);
        g.bench_with_input(BenchmarkId::from_parameter(n), &games, |b, games| {
            b.iter(|| games.iter().map(small_progress_measures).count())
        });
    }
    g.finish();
}
