use std::ops::ControlFlow;
use std::time::Instant;

use super::prune::GoodnessCounter;
use super::{Algorithm, GraphSystem, SolveReport, SolveStats};
use crate::bitset::VertexSet;
use crate::budget::Budget;
use crate::error::Result;

struct Enumerator<'a, F> {
    g: &'a GraphSystem,
    budget: Budget,
    calls: u64,
    visit: F,
}

impl<F> Enumerator<'_, F>
where
    F: FnMut(&VertexSet) -> ControlFlow<()>,
{
    // Bron–Kerbosch with Tomita pivoting, run on the complement of G0 so that
    // cliques found are the maximal independent sets of G0.
    fn extend(&mut self, r: &mut VertexSet, p: VertexSet, mut x: VertexSet) -> Result<ControlFlow<()>> {
        self.calls += 1;
        self.budget.check(self.calls)?;
        if p.is_empty() {
            if x.is_empty() {
                return Ok((self.visit)(r));
            }
            return Ok(ControlFlow::Continue(()));
        }
        let g = self.g;
        // Non-neighbours (in the complement sense) of the pivot in p.
        let p_len = p.len();
        let pivot = p
            .iter()
            .chain(x.iter())
            .max_by_key(|&u| p_len - p.intersection_count(g.conflicts_of(u)) - usize::from(p.contains(u)))
            .expect("p is non-empty");
        let mut candidates = g.conflicts_of(pivot).clone();
        candidates.insert(pivot);
        candidates.intersect_with(&p);

        let mut p = p;
        for v in candidates.iter() {
            let mut p_next = p.clone();
            p_next.difference_with(g.conflicts_of(v));
            p_next.remove(v);
            let mut x_next = x.clone();
            x_next.difference_with(g.conflicts_of(v));
            x_next.remove(v);
            r.insert(v);
            let flow = self.extend(r, p_next, x_next)?;
            r.remove(v);
            if flow.is_break() {
                return Ok(flow);
            }
            p.remove(v);
            x.insert(v);
        }
        Ok(ControlFlow::Continue(()))
    }
}

/// Calls `visit` on every maximal independent set of `G0` in a deterministic
/// order until it breaks. Returns the number of recursive calls made.
pub fn for_each_maximal_independent_set<F>(g: &GraphSystem, budget: Budget, visit: F) -> Result<u64>
where
    F: FnMut(&VertexSet) -> ControlFlow<()>,
{
    let n = g.n_vertices();
    let mut e = Enumerator {
        g,
        budget,
        calls: 0,
        visit,
    };
    let mut r = VertexSet::empty(n);
    let _ = e.extend(&mut r, VertexSet::full(n), VertexSet::empty(n))?;
    Ok(e.calls)
}

/// ALGORITHM-A: prune every maximal independent set and stop at the first
/// that still contains a GIS.
pub fn solve_a(g: &GraphSystem) -> SolveReport {
    solve_a_with_budget(g, Budget::unlimited()).expect("unlimited budget")
}

pub fn solve_a_with_budget(g: &GraphSystem, budget: Budget) -> Result<SolveReport> {
    let start = Instant::now();
    let mut pruned = 0u64;
    let mut found = None;
    let calls = for_each_maximal_independent_set(g, budget, |y| {
        let mut counter = GoodnessCounter::new(g, y.clone());
        pruned += counter.prune(g);
        if counter.set().is_empty() {
            ControlFlow::Continue(())
        } else {
            found = Some(counter.into_set());
            ControlFlow::Break(())
        }
    })?;
    let stats = SolveStats {
        branches: calls,
        pruned_vertices: pruned,
        elapsed: start.elapsed(),
    };
    Ok(SolveReport::new(g, found, Algorithm::A, stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangles(k: usize) -> GraphSystem {
        let mut b = GraphSystem::builder(3 * k, 1);
        for t in 0..k {
            b.conflict(3 * t, 3 * t + 1).unwrap();
            b.conflict(3 * t + 1, 3 * t + 2).unwrap();
            b.conflict(3 * t, 3 * t + 2).unwrap();
        }
        b.build().unwrap()
    }

    #[test]
    fn moon_moser_count() {
        for k in 1..=4 {
            let g = triangles(k);
            let mut count = 0;
            for_each_maximal_independent_set(&g, Budget::unlimited(), |s| {
                assert_eq!(s.len(), k);
                assert!(g.is_independent(s));
                count += 1;
                ControlFlow::Continue(())
            })
            .unwrap();
            assert_eq!(count, 3usize.pow(k as u32));
        }
    }

    #[test]
    fn empty_graph_has_one_maximal_set() {
        let g = GraphSystem::builder(0, 1).build().unwrap();
        let mut seen = Vec::new();
        for_each_maximal_independent_set(&g, Budget::unlimited(), |s| {
            seen.push(s.len());
            ControlFlow::Continue(())
        })
        .unwrap();
        assert_eq!(seen, vec![0]);
        assert!(!solve_a(&g).is_sat());
    }

    #[test]
    fn two_cycle_is_sat() {
        let mut b = GraphSystem::builder(2, 1);
        b.edge(1, 0, 1).unwrap().edge(1, 1, 0).unwrap();
        let g = b.build().unwrap();
        let report = solve_a(&g);
        assert!(report.is_sat());
        assert_eq!(report.certificate.unwrap().vertices().to_vec(), vec![0, 1]);
    }

    #[test]
    fn budget_is_honoured() {
        let g = triangles(8);
        let err = solve_a_with_budget(&g, Budget::unlimited().with_max_branches(10)).unwrap_err();
        assert_eq!(err, crate::Error::BudgetExceeded);
    }
}
