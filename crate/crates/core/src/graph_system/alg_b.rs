use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::prune::GoodnessCounter;
use super::{Algorithm, GraphSystem, SolveReport, SolveStats};
use crate::bitset::VertexSet;
use crate::budget::Budget;
use crate::error::Result;

/// One pending LAS-VEGAS call `(X, Y)`. `added` is the vertex last moved into
/// X; everything conflicting with the older members of X is already gone from Y.
#[derive(Clone)]
struct Call {
    x: VertexSet,
    y: GoodnessCounter,
    added: Option<usize>,
}

/// ALGORITHM-B: LAS-VEGAS(G, ∅, V) with the conflicting pair and the branch
/// order drawn from a ChaCha8 stream seeded by `seed`.
pub fn solve_b(g: &GraphSystem, seed: u64) -> SolveReport {
    solve_b_with_budget(g, seed, Budget::unlimited()).expect("unlimited budget")
}

pub fn solve_b_with_budget(g: &GraphSystem, seed: u64, budget: Budget) -> Result<SolveReport> {
    let start = Instant::now();
    let n = g.n_vertices();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut branches = 0u64;
    let mut pruned = 0u64;
    let mut found = None;
    let mut degrees = vec![0usize; n];

    let mut stack = vec![Call {
        x: VertexSet::empty(n),
        y: GoodnessCounter::new(g, VertexSet::full(n)),
        added: None,
    }];

    while let Some(mut call) = stack.pop() {
        branches += 1;
        budget.check(branches)?;

        if let Some(u) = call.added {
            // X must stay independent.
            if g.conflicts_of(u).intersects(&call.x) {
                continue;
            }
            // drop everything conflicting with the new member of X.
            let doomed: Vec<usize> = g.conflicts_of(u).iter_intersection(call.y.set()).collect();
            for v in doomed {
                if call.y.remove(g, v) {
                    pruned += 1;
                }
            }
        }
        // drop bad vertices.
        pruned += call.y.prune(g);

        // no GIS between X and Y once Y is empty or has lost part of X.
        let y = call.y.set();
        if y.is_empty() || !call.x.is_subset(y) {
            continue;
        }

        // an independent, fully good Y is itself a GIS.
        let mut total = 0usize;
        for v in y.iter() {
            let d = g.conflicts_of(v).intersection_count(y);
            degrees[v] = d;
            total += d;
        }
        if total == 0 {
            found = Some(call.y.into_set());
            break;
        }

        // uniformly random ordered conflict (u, v) inside Y; u is omitted first.
        let mut pick = rng.gen_range(0..total);
        let mut u = usize::MAX;
        for w in y.iter() {
            if pick < degrees[w] {
                u = w;
                break;
            }
            pick -= degrees[w];
        }
        let v = g
            .conflicts_of(u)
            .iter_intersection(y)
            .nth(pick)
            .expect("degree bookkeeping");

        // second branch (X ∪ {u}, Y \ {v}) sits under the first (X, Y \ {u}).
        let mut with_u = call.clone();
        with_u.y.remove(g, v);
        with_u.x.insert(u);
        with_u.added = Some(u);
        stack.push(with_u);

        call.y.remove(g, u);
        call.added = None;
        stack.push(call);
    }

    let stats = SolveStats {
        branches,
        pruned_vertices: pruned,
        elapsed: start.elapsed(),
    };
    Ok(SolveReport::new(g, found, Algorithm::B, stats))
}
