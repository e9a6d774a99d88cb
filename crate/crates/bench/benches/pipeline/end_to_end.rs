use criterion::Criterion;
use hflcheck::corpus;
use hflcheck::{run_text, Options};

pub fn bench_corpus(c: &mut Criterion) {
    let mut g = c.benchmark_group("check");
    for e in corpus::all() {
        g.bench_function(e.name, |b| b.iter(|| run_text(e.hes, e.lts, &Options::default()).unwrap().verdict));
    }
    g.finish();
}
