//! Reproducible random systems, node sets, and displacement instances.
//!
//! All sampling goes through a caller-supplied RNG so test suites and
//! benchmarks can pin seeds; `rand_chacha::ChaCha8Rng` is re-exported as
//! the recommended deterministic engine.

pub use rand_chacha::ChaCha8Rng;

use rand::{Rng, SeedableRng};

/// Deterministic RNG for a fixed seed.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

use crate::dense::DenseMatrix;
use crate::displacement::DisplacementInstance;
use crate::poly_systems::{NodeSet, PolyFamily, PolySystem};

/// Default node window.
pub const NODE_LO: f64 = 0.3;
/// Default node window.
pub const NODE_HI: f64 = 2.0;
/// Default minimal pairwise node gap.
pub const NODE_MIN_GAP: f64 = 1e-3;

fn uniform(rng: &mut impl Rng, m: usize) -> Vec<f64> {
    (0..m).map(|_| rng.gen_range(-1.0..=1.0)).collect()
}

/// Degree-raising coefficients: magnitude in [0.5, 1.5], random sign, so
/// they are bounded away from zero.
fn raising(rng: &mut impl Rng, m: usize) -> Vec<f64> {
    (0..m)
        .map(|_| {
            let mag = rng.gen_range(0.5..=1.5);
            if rng.gen::<bool>() {
                mag
            } else {
                -mag
            }
        })
        .collect()
}

/// Random valid system of the given family and order.
pub fn random_system(family: PolyFamily, n: usize, rng: &mut impl Rng) -> PolySystem {
    let m = n.saturating_sub(1);
    let sys = match family {
        PolyFamily::Quasiseparable | PolyFamily::Semiseparable => PolySystem::new(
            family,
            n,
            1.0,
            uniform(rng, m),
            uniform(rng, m),
            uniform(rng, m),
            raising(rng, m),
            uniform(rng, m),
        ),
        PolyFamily::WellFree => {
            let mut beta = uniform(rng, m);
            if m > 0 {
                beta[0] = 0.0;
            }
            PolySystem::new(
                family,
                n,
                1.0,
                raising(rng, m),
                beta,
                uniform(rng, m),
                uniform(rng, m),
                vec![0.0; m],
            )
        }
    };
    sys.expect("sampled coefficients always satisfy the family invariants")
}

/// Random nodes in `[lo, hi]` with pairwise gaps of at least `min_gap`,
/// drawn by rejection. Panics if the window cannot fit `n` such nodes
/// within a bounded number of attempts; use [`jittered_nodes`] for dense
/// packings.
pub fn random_nodes_in(n: usize, lo: f64, hi: f64, min_gap: f64, rng: &mut impl Rng) -> NodeSet {
    assert!(lo < hi && lo > 0.0, "window must be positive and nonempty");
    for _ in 0..10_000 {
        let mut xs: Vec<f64> = (0..n).map(|_| rng.gen_range(lo..=hi)).collect();
        let mut sorted = xs.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if sorted.windows(2).all(|w| w[1] - w[0] >= min_gap) {
            xs.shrink_to_fit();
            return NodeSet::new(xs).expect("gap-separated positive nodes are valid");
        }
    }
    panic!("could not place {n} nodes with gap {min_gap} in [{lo}, {hi}]");
}

/// Random nodes in the default window `[0.3, 2.0]` with gap `1e-3`.
pub fn random_nodes(n: usize, rng: &mut impl Rng) -> NodeSet {
    random_nodes_in(n, NODE_LO, NODE_HI, NODE_MIN_GAP, rng)
}

/// Jittered uniform grid on `[lo, hi]`: gaps are at least half the grid
/// step by construction, so arbitrarily large `n` is fine.
pub fn jittered_nodes(n: usize, lo: f64, hi: f64, rng: &mut impl Rng) -> NodeSet {
    assert!(lo < hi && lo > 0.0, "window must be positive and nonempty");
    let h = (hi - lo) / n as f64;
    let xs: Vec<f64> = (0..n)
        .map(|i| lo + (i as f64 + 0.5) * h + rng.gen_range(-0.25..=0.25) * h)
        .collect();
    NodeSet::new(xs).expect("jittered grid nodes are distinct and positive")
}

/// Random generator pair `(G, B)` of rank `alpha_rank` with entries in
/// `[-1, 1]`.
pub fn random_generators(
    n: usize,
    alpha_rank: usize,
    rng: &mut impl Rng,
) -> (DenseMatrix, DenseMatrix) {
    let mut g = DenseMatrix::zeros(n, alpha_rank);
    let mut b = DenseMatrix::zeros(alpha_rank, n);
    for i in 0..n {
        for a in 0..alpha_rank {
            g[(i, a)] = rng.gen_range(-1.0..=1.0);
        }
    }
    for a in 0..alpha_rank {
        for j in 0..n {
            b[(a, j)] = rng.gen_range(-1.0..=1.0);
        }
    }
    (g, b)
}

/// Random displacement instance with default nodes.
pub fn random_instance(
    family: PolyFamily,
    n: usize,
    alpha_rank: usize,
    rng: &mut impl Rng,
) -> DisplacementInstance {
    let sys = random_system(family, n, rng);
    let nodes = random_nodes(n, rng);
    let (g, b) = random_generators(n, alpha_rank, rng);
    DisplacementInstance::new(sys, nodes, g, b).expect("sampled shapes are consistent")
}

/// Random displacement instance on caller-chosen nodes.
pub fn random_instance_on(
    family: PolyFamily,
    nodes: NodeSet,
    alpha_rank: usize,
    rng: &mut impl Rng,
) -> DisplacementInstance {
    let n = nodes.n();
    let sys = random_system(family, n, rng);
    let (g, b) = random_generators(n, alpha_rank, rng);
    DisplacementInstance::new(sys, nodes, g, b).expect("sampled shapes are consistent")
}
