//! Deterministic instance generators: the four benchmark families and the
//! hardness reductions, used both as benchmarks and as cross-checks.
//!
//! Randomness comes from ChaCha8 seeded with `seed_from_u64`, so a
//! [`GenSpec`] determines its output byte for byte on every platform.

mod cnf;
mod experiments;
mod random;
mod reductions;

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use cnf::{from_cnf, parse_dimacs_cnf, random_k_cnf, write_dimacs_cnf, Cnf};
pub use experiments::{gen_exp_a, gen_exp_b, gen_exp_b_graph, gen_exp_c, gen_exp_d, ExpD};
pub use random::random_cis;
pub use reductions::{
    from_alternating_graph, from_independent_set, parse_alternating_graph, parse_dimacs_graph,
    write_alternating_graph, write_dimacs_graph, AlternatingGraph, SimpleGraph,
};

/// Everything that determines a generated artifact.
#[derive(Debug, Clone, PartialEq)]
pub enum GenSpec {
    ExpA { n: usize },
    ExpB { n: usize },
    ExpC { n: usize },
    ExpD { n: usize, seed: u64 },
    FromCnf { source: String },
    FromIndependentSet { source: String, k: usize },
    FromAlternatingGraph { source: String },
    RandomCis { n: usize, m: usize, p_conflict: f64, p_layer: f64, seed: u64 },
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenSpec::ExpA { n } => write!(f, "family=exp_a n={n}"),
            GenSpec::ExpB { n } => write!(f, "family=exp_b n={n}"),
            GenSpec::ExpC { n } => write!(f, "family=exp_c n={n}"),
            GenSpec::ExpD { n, seed } => write!(f, "family=exp_d n={n} seed={seed} rng=chacha8"),
            GenSpec::FromCnf { source } => write!(f, "family=from_cnf source={source}"),
            GenSpec::FromIndependentSet { source, k } => {
                write!(f, "family=from_independent_set source={source} k={k}")
            }
            GenSpec::FromAlternatingGraph { source } => write!(f, "family=from_alternating_graph source={source}"),
            GenSpec::RandomCis { n, m, p_conflict, p_layer, seed } => write!(
                f,
                "family=random_cis n={n} m={m} p_conflict={p_conflict} p_layer={p_layer} seed={seed} rng=chacha8"
            ),
        }
    }
}

impl GenSpec {
    /// Comment lines recorded at the top of generated files.
    pub fn header(&self) -> Vec<String> {
        vec![format!("generated by fo2cis gen: {self}")]
    }
}

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
