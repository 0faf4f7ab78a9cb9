//! Shared instance construction for the benchmarks: deterministic
//! rank-1 quasiseparable instances on a jittered node grid, the same
//! distribution the complexity acceptance check uses.

use qsvand::instance_gen::{jittered_nodes, random_generators, random_system, seeded_rng};
use qsvand::{DisplacementInstance, PolyFamily};

pub fn bench_instance(n: usize, alpha: usize, seed: u64) -> DisplacementInstance {
    let mut rng = seeded_rng(seed);
    let nodes = jittered_nodes(n, 0.3, 2.0, &mut rng);
    let sys = random_system(PolyFamily::Quasiseparable, n, &mut rng);
    let (g, b) = random_generators(n, alpha, &mut rng);
    DisplacementInstance::new(sys, nodes, g, b).expect("bench instance shapes are consistent")
}
