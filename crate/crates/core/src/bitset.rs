use std::fmt;

use fixedbitset::FixedBitSet;

/// A subset of the vertices of a graph system, stored as a fixed-width bit
/// assignment so that set algebra runs a machine word at a time.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: FixedBitSet,
}

impl VertexSet {
    pub fn empty(width: usize) -> Self {
        VertexSet {
            bits: FixedBitSet::with_capacity(width),
        }
    }

    pub fn full(width: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(width);
        bits.insert_range(..);
        VertexSet { bits }
    }

    pub fn from_vertices(width: usize, vertices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(width);
        for v in vertices {
            set.insert(v);
        }
        set
    }

    /// Number of vertices of the owning system (not the number of members).
    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.bits.contains(v)
    }

    /// Panics if `v` is outside the width.
    pub fn insert(&mut self, v: usize) {
        self.bits.insert(v);
    }

    pub fn remove(&mut self, v: usize) {
        self.bits.set(v, false);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.bits.minimum()
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        self.bits.difference_with(&other.bits);
    }

    pub fn intersection_count(&self, other: &VertexSet) -> usize {
        self.bits.intersection_count(&other.bits)
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        !self.bits.is_disjoint(&other.bits)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    /// Members of `self` that are also in `other`, in ascending order.
    pub fn iter_intersection<'a>(&'a self, other: &'a VertexSet) -> impl Iterator<Item = usize> + 'a {
        self.bits.intersection(&other.bits)
    }

    pub fn complement(&self) -> VertexSet {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        VertexSet { bits }
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra() {
        let a = VertexSet::from_vertices(70, [0, 3, 65]);
        let b = VertexSet::from_vertices(70, [3, 65, 69]);
        assert_eq!(a.intersection_count(&b), 2);
        let mut c = a.clone();
        c.difference_with(&b);
        assert_eq!(c.to_vec(), vec![0]);
        assert!(c.is_subset(&a));
        assert_eq!(VertexSet::full(70).len(), 70);
        assert_eq!(a.complement().len(), 67);
        assert_eq!(a.iter_intersection(&b).collect::<Vec<_>>(), vec![3, 65]);
    }
}
