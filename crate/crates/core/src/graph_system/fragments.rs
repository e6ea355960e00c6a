//! Polynomial fast paths for the tractable fragments of CIS.

use std::time::Instant;

use super::prune::GoodnessCounter;
use super::{verify_gis, Algorithm, GraphSystem, SolveReport, SolveStats};
use crate::bitset::VertexSet;
use crate::error::{Error, Result};

/// Conflict-free systems have a single maximal independent set, `V` itself.
pub fn solve_conflict_free(g: &GraphSystem) -> Result<SolveReport> {
    if !g.classify().conflict_free {
        return Err(Error::Precondition("conflict graph has edges".into()));
    }
    let start = Instant::now();
    let mut counter = GoodnessCounter::new(g, g.vertices());
    let pruned = counter.prune(g);
    let set = counter.into_set();
    let stats = SolveStats {
        branches: 1,
        pruned_vertices: pruned,
        elapsed: start.elapsed(),
    };
    Ok(SolveReport::new(g, (!set.is_empty()).then_some(set), Algorithm::ConflictFree, stats))
}

/// Conflict-free with one layer: a GIS exists iff layer 1 has a directed cycle.
/// The certificate is the vertex set of the first cycle found.
pub fn solve_cycle_m1(g: &GraphSystem) -> Result<SolveReport> {
    if !g.classify().conflict_free || g.m() != 1 {
        return Err(Error::Precondition("cycle solver needs a conflict-free system with m = 1".into()));
    }
    let start = Instant::now();
    let cycle = find_cycle(g, 1);
    let found = cycle.map(|c| VertexSet::from_vertices(g.n_vertices(), c));
    let stats = SolveStats {
        branches: 1,
        pruned_vertices: 0,
        elapsed: start.elapsed(),
    };
    Ok(SolveReport::new(g, found, Algorithm::CycleM1, stats))
}

fn find_cycle(g: &GraphSystem, layer: usize) -> Option<Vec<usize>> {
    const WHITE: u8 = 0;
    const GREY: u8 = 1;
    const BLACK: u8 = 2;
    let n = g.n_vertices();
    let succ: Vec<Vec<usize>> = (0..n).map(|u| g.out_neighbors(layer, u).to_vec()).collect();
    let mut colour = vec![WHITE; n];
    let mut path: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if colour[root] != WHITE {
            continue;
        }
        colour[root] = GREY;
        path.push((root, 0));
        while let Some(&mut (u, ref mut next)) = path.last_mut() {
            if let Some(&v) = succ[u].get(*next) {
                *next += 1;
                match colour[v] {
                    WHITE => {
                        colour[v] = GREY;
                        path.push((v, 0));
                    }
                    GREY => {
                        let from = path.iter().position(|&(w, _)| w == v).expect("grey vertex is on the path");
                        return Some(path[from..].iter().map(|&(w, _)| w).collect());
                    }
                    _ => {}
                }
            } else {
                colour[u] = BLACK;
                path.pop();
            }
        }
    }
    None
}

/// Uniquely-outgoing systems: a GIS exists iff some forward closure `R(u)` is one.
pub fn solve_uniquely_outgoing(g: &GraphSystem) -> Result<SolveReport> {
    if !g.classify().uniquely_outgoing {
        return Err(Error::Precondition("some vertex has two out-edges in one layer".into()));
    }
    let start = Instant::now();
    let n = g.n_vertices();
    let mut found = None;
    let mut tried = 0;
    for u in 0..n {
        tried += 1;
        let closure = forward_closure(g, u);
        if verify_gis(g, &closure)? {
            found = Some(closure);
            break;
        }
    }
    let stats = SolveStats {
        branches: tried,
        pruned_vertices: 0,
        elapsed: start.elapsed(),
    };
    Ok(SolveReport::new(g, found, Algorithm::UniquelyOutgoing, stats))
}

/// Vertices reachable from `u` (including `u`) along edges of any layer.
fn forward_closure(g: &GraphSystem, u: usize) -> VertexSet {
    let mut seen = VertexSet::from_vertices(g.n_vertices(), [u]);
    let mut queue = vec![u];
    while let Some(w) = queue.pop() {
        for layer in 1..=g.m() {
            for v in g.out_neighbors(layer, w).iter() {
                if !seen.contains(v) {
                    seen.insert(v);
                    queue.push(v);
                }
            }
        }
    }
    seen
}
