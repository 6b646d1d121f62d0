//! A small benchmark: bandwidth on seeded random graphs, rows as CSV.

use std::time::Duration;

use gridsat::encode::Problem;
use gridsat::graph::generators::random_connected;
use gridsat::sat::Backend;
use gridsat::search::{run_benchmark, write_csv, BenchConfig, BenchInstance, Query};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let seed = 42;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let instances: Vec<BenchInstance> = (0..8)
        .map(|i| BenchInstance::new(format!("g{i}"), random_connected(5 + i % 4, 0.3, &mut rng)))
        .collect();
    let config = BenchConfig {
        query: Query::new(Problem::Bandwidth),
        timeout: Duration::from_secs(20),
        early_stop: 400,
        workers: 2,
        seed,
        backend: Backend::default(),
    };
    let report = run_benchmark(instances, &config);
    write_csv(&report.rows, std::io::stdout()).unwrap();
}
