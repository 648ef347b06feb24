use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use crorbit::exec::Exec;
use crorbit::verify::{run, Suite, VerifyConfig};

fn sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    for suite in [
        Suite::Algebra,
        Suite::TheoremA,
        Suite::Lemmas4x,
        Suite::Congruence,
    ] {
        for exec in [Exec::Sequential, Exec::Parallel] {
            let config = VerifyConfig {
                seed: 7,
                trials: Some(64),
                exec,
            };
            group.bench_with_input(
                BenchmarkId::new(suite.name(), format!("{exec:?}").to_lowercase()),
                &config,
                |b, config| b.iter(|| black_box(run(suite, config))),
            );
        }
    }
    group.finish();
}

criterion_group!(benches, sweeps);
criterion_main!(benches);
