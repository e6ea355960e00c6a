use std::time::Instant;

use super::{Algorithm, GraphSystem, SolveReport, SolveStats};
use crate::bitset::VertexSet;
use crate::error::{Error, Result};

pub const DEFAULT_BRUTE_FORCE_CAP: usize = 20;

/// Test oracle: tries every non-empty subset, largest masks first, against the
/// GIS definition. Refuses systems with more than [`DEFAULT_BRUTE_FORCE_CAP`] vertices.
pub fn brute_force(g: &GraphSystem) -> Result<SolveReport> {
    brute_force_with_cap(g, DEFAULT_BRUTE_FORCE_CAP)
}

pub fn brute_force_with_cap(g: &GraphSystem, cap: usize) -> Result<SolveReport> {
    let n = g.n_vertices();
    if n > cap || n > 30 {
        return Err(Error::TooLarge(format!("brute force refuses {n} vertices (cap {cap})")));
    }
    let start = Instant::now();
    let mask_of = |s: &VertexSet| s.iter().fold(0u32, |acc, v| acc | (1 << v));
    let conflicts: Vec<u32> = (0..n).map(|u| mask_of(g.conflicts_of(u))).collect();
    let layers: Vec<Vec<u32>> = (1..=g.m())
        .map(|layer| (0..n).map(|u| mask_of(g.out_neighbors(layer, u))).collect())
        .collect();

    let is_gis = |mask: u32| {
        (0..n).filter(|&u| mask >> u & 1 == 1).all(|u| {
            conflicts[u] & mask == 0 && layers.iter().all(|layer| layer[u] & mask != 0)
        })
    };

    let full: u32 = if n == 0 { 0 } else { u32::MAX >> (32 - n) };
    let mut checked = 0u64;
    let mut found = None;
    for mask in (1..=full).rev() {
        checked += 1;
        if is_gis(mask) {
            found = Some(VertexSet::from_vertices(n, (0..n).filter(|&u| mask >> u & 1 == 1)));
            break;
        }
    }
    let stats = SolveStats {
        branches: checked,
        pruned_vertices: 0,
        elapsed: start.elapsed(),
    };
    Ok(SolveReport::new(g, found, Algorithm::BruteForce, stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edgeless_is_unsat() {
        for n in 0..6 {
            let g = GraphSystem::builder(n, 2).build().unwrap();
            assert!(!brute_force(&g).unwrap().is_sat());
        }
    }

    #[test]
    fn full_self_loops_give_all_vertices() {
        let mut b = GraphSystem::builder(5, 2);
        for v in 0..5 {
            b.edge(1, v, v).unwrap().edge(2, v, v).unwrap();
        }
        let g = b.build().unwrap();
        let report = brute_force(&g).unwrap();
        assert_eq!(report.certificate.unwrap().len(), 5);
    }

    #[test]
    fn cap_is_enforced() {
        let g = GraphSystem::builder(21, 1).build().unwrap();
        assert!(matches!(brute_force(&g), Err(Error::TooLarge(_))));
        assert!(brute_force_with_cap(&g, 22).is_ok());
    }
}
