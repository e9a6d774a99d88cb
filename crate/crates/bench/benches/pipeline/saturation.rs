use criterion::{BenchmarkId, Criterion, Throughput};
use hflcheck::saturation::saturate;
use hflcheck::Options;
use hflcheck_bench::{chain, CHAIN_SIZES};

pub fn bench_chain(c: &mut Criterion) {
    let mut g = c.benchmark_group("saturate/chain");
    for n in CHAIN_SIZES {
        let p = chain(n);
        g.throughput(Throughput::Elements(p.hes.size() as u64));
        g.bench_with_input(BenchmarkId::from_parameter(n), &p, |b, p| {
            b.iter(|| saturate(&p.lts, &p.hes, &p.types, &p.flow, &Options::default()))
        });
    }
    g.finish();
}

pub fn bench_flags(c: &mut Criterion) {
    let mut g = c.benchmark_group("saturate/flags");
    let p = chain(8);
    for (restrict_gamma0, subsume) in [(true, true), (true, false), (false, true), (false, false)] {
        let opts = Options { restrict_gamma0, subsume, trace: false };
        let id = format!("restrict={restrict_gamma0},subsume={subsume}");
        g.bench_function(id, |b| b.iter(|| saturate(&p.lts, &p.hes, &p.types, &p.flow, &opts)));
    }
    g.finish();
}
