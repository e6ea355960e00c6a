use rand::Rng;

use crate::error::{Error, Result};
use crate::graph_system::GraphSystem;

/// Each conflict `{u, v}` (`u < v`) is drawn with probability `p_conflict`,
/// then each layer edge `(u, v)`, self-loops included, with `p_layer`, layer
/// by layer in row-major order.
pub fn random_cis(n: usize, m: usize, p_conflict: f64, p_layer: f64, seed: u64) -> Result<GraphSystem> {
    for p in [p_conflict, p_layer] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Usage(format!("probability {p} outside [0, 1]")));
        }
    }
    let mut rng = super::rng(seed);
    let mut b = GraphSystem::builder(n, m);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p_conflict) {
                b.conflict(u, v)?;
            }
        }
    }
    for layer in 1..=m {
        for u in 0..n {
            for v in 0..n {
                if rng.gen_bool(p_layer) {
                    b.edge(layer, u, v)?;
                }
            }
        }
    }
    b.build()
}
