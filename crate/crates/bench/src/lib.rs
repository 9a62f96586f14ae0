//! Fixed workloads shared by the benchmarks.

use pdcontract::generator::{gen_random_pd, GeneratorConfig};
use pdcontract::Game;

/// A seeded dilemma with exactly these strategy counts.
pub fn workload(seed: u64, counts: &[usize]) -> Game {
    let mut cfg = GeneratorConfig::new(seed);
    cfg.counts = Some(counts.to_vec());
    gen_random_pd(&cfg).expect("default noise always yields a dilemma")
}

pub const SHAPES: &[&[usize]] = &[&[2, 2, 2], &[3, 3, 3], &[3, 3, 3, 3]];
