use criterion::{criterion_group, criterion_main};

mod end_to_end;
mod saturation;
mod solvers;

criterion_group!(saturation, saturation::bench_chain, saturation::bench_flags);
criterion_group!(solvers, solvers::bench_zielonka, solvers::bench_spm);
criterion_group!(end_to_end, end_to_end::bench_corpus);

criterion_main!(saturation, solvers, end_to_end);
