use super::GraphSystem;
use crate::bitset::VertexSet;
use crate::error::{Error, Result};

/// Working set plus, for every member and layer, the number of out-neighbours
/// still inside the set. A member is bad exactly when one of its counters is 0.
#[derive(Clone)]
pub(crate) struct GoodnessCounter {
    set: VertexSet,
    counts: Vec<u32>,
    pending: Vec<usize>,
}

impl GoodnessCounter {
    pub(crate) fn new(g: &GraphSystem, set: VertexSet) -> Self {
        let m = g.m();
        let mut counts = vec![0u32; g.n_vertices() * m];
        let mut pending = Vec::new();
        for u in set.iter() {
            let mut bad = false;
            for layer in 1..=m {
                let c = g.out_neighbors(layer, u).intersection_count(&set) as u32;
                counts[u * m + layer - 1] = c;
                bad |= c == 0;
            }
            if bad {
                pending.push(u);
            }
        }
        GoodnessCounter { set, counts, pending }
    }

    pub(crate) fn set(&self) -> &VertexSet {
        &self.set
    }

    pub(crate) fn into_set(self) -> VertexSet {
        self.set
    }

    /// Removes `v` (if present) and queues members that lose their last witness.
    pub(crate) fn remove(&mut self, g: &GraphSystem, v: usize) -> bool {
        if !self.set.contains(v) {
            return false;
        }
        self.set.remove(v);
        let m = g.m();
        for layer in 1..=m {
            for w in g.in_neighbors(layer, v).iter_intersection(&self.set) {
                let c = &mut self.counts[w * m + layer - 1];
                *c -= 1;
                if *c == 0 {
                    self.pending.push(w);
                }
            }
        }
        true
    }

    /// Removes bad vertices until none is left; returns how many were removed.
    pub(crate) fn prune(&mut self, g: &GraphSystem) -> u64 {
        let mut removed = 0;
        while let Some(u) = self.pending.pop() {
            if self.remove(g, u) {
                removed += 1;
            }
        }
        removed
    }
}

/// The unique maximal GIS inside the independent set `y`, or the
/// empty set when `y` contains no GIS.
pub fn prune_to_max_gis(g: &GraphSystem, y: &VertexSet) -> Result<VertexSet> {
    if y.width() != g.n_vertices() {
        return Err(Error::WidthMismatch {
            expected: g.n_vertices(),
            found: y.width(),
        });
    }
    if let Some((u, v)) = first_conflict(g, y) {
        return Err(Error::NotIndependent(u, v));
    }
    let mut counter = GoodnessCounter::new(g, y.clone());
    counter.prune(g);
    Ok(counter.into_set())
}

pub(crate) fn first_conflict(g: &GraphSystem, s: &VertexSet) -> Option<(usize, usize)> {
    s.iter()
        .find_map(|u| g.conflicts_of(u).iter_intersection(s).next().map(|v| (u, v)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn system(n: usize, edges: &[(usize, usize)]) -> GraphSystem {
        let mut b = GraphSystem::builder(n, 1);
        for &(u, v) in edges {
            b.edge(1, u, v).unwrap();
        }
        b.build().unwrap()
    }

    #[test]
    fn two_cycle_survives() {
        let g = system(2, &[(0, 1), (1, 0)]);
        let out = prune_to_max_gis(&g, &g.vertices()).unwrap();
        assert_eq!(out.to_vec(), vec![0, 1]);
    }

    #[test]
    fn chain_collapses() {
        // 1 is bad, after removing it 0 is bad.
        let g = system(2, &[(0, 1)]);
        assert!(prune_to_max_gis(&g, &g.vertices()).unwrap().is_empty());
    }

    #[test]
    fn cycle_with_dangling_vertex() {
        let g = system(4, &[(0, 1), (1, 2), (2, 0), (3, 0)]);
        let out = prune_to_max_gis(&g, &g.vertices()).unwrap();
        assert_eq!(out.to_vec(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn result_is_a_fixed_point_and_subset() {
        let g = system(5, &[(0, 1), (1, 0), (2, 3), (3, 4), (4, 4)]);
        let y = VertexSet::from_vertices(5, [0, 1, 2, 3]);
        let out = prune_to_max_gis(&g, &y).unwrap();
        assert_eq!(out.to_vec(), vec![0, 1]);
        assert!(out.is_subset(&y));
        assert_eq!(prune_to_max_gis(&g, &out).unwrap(), out);
    }

    #[test]
    fn rejects_dependent_input() {
        let mut b = GraphSystem::builder(2, 1);
        b.conflict(0, 1).unwrap();
        let g = b.build().unwrap();
        assert_eq!(prune_to_max_gis(&g, &g.vertices()).unwrap_err(), Error::NotIndependent(0, 1));
    }
}
