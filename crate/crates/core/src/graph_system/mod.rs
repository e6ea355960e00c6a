//! Graph systems `(G0, G1, ..., Gm)` and the solvers for the conditional
//! independent set (CIS) problem.
//!
//! `G0` is the undirected conflict graph; `G1..Gm` are directed layers that may
//! carry self-loops. A good independent set (GIS) is a non-empty independent
//! set of `G0` in which every member has, in every layer, an out-neighbour that
//! is also a member.
//!
//! Layers are numbered from 1 in the public API, matching the `.cis` format.

mod alg_a;
mod alg_b;
mod brute;
mod cis_format;
mod fragments;
mod prune;

use std::time::Duration;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};

pub use alg_a::{for_each_maximal_independent_set, solve_a, solve_a_with_budget};
pub use alg_b::{solve_b, solve_b_with_budget};
pub use brute::{brute_force, brute_force_with_cap, DEFAULT_BRUTE_FORCE_CAP};
pub use cis_format::{parse_certificate, parse_cis, write_certificate, write_cis};
pub use fragments::{solve_conflict_free, solve_cycle_m1, solve_uniquely_outgoing};
pub use prune::prune_to_max_gis;

/// Cube root of 3, the base of ALGORITHM-A's running time (Moon–Moser bound).
pub const DELTA_A: f64 = 1.4423;
/// Golden ratio, the base of ALGORITHM-B's running time.
pub const DELTA_B: f64 = 1.6181;
/// Square root of 2; no CIS algorithm beats this base unless SETH fails.
pub const DELTA_LOWER: f64 = std::f64::consts::SQRT_2;

#[derive(Clone)]
pub struct GraphSystem {
    n: usize,
    m: usize,
    conflicts: Vec<VertexSet>,
    out: Vec<Vec<VertexSet>>,
    inc: Vec<Vec<VertexSet>>,
    labels: Option<Vec<String>>,
}

/// Edge equality; vertex labels are annotations and do not take part.
impl PartialEq for GraphSystem {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.m == other.m && self.conflicts == other.conflicts && self.out == other.out
    }
}

impl Eq for GraphSystem {}

impl std::fmt::Debug for GraphSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut d = f.debug_struct("GraphSystem");
        d.field("n", &self.n).field("m", &self.m);
        d.field("conflicts", &self.conflict_edges().collect::<Vec<_>>());
        for layer in 1..=self.m {
            d.field(&format!("layer{layer}"), &self.layer_edges(layer).collect::<Vec<_>>());
        }
        d.finish()
    }
}

impl GraphSystem {
    pub fn builder(n_vertices: usize, m: usize) -> GraphSystemBuilder {
        GraphSystemBuilder::new(n_vertices, m)
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Conflict neighbourhood of `u` in `G0`.
    pub fn conflicts_of(&self, u: usize) -> &VertexSet {
        &self.conflicts[u]
    }

    pub fn conflicting(&self, u: usize, v: usize) -> bool {
        self.conflicts[u].contains(v)
    }

    /// Out-neighbours of `u` in layer `layer` (1-based).
    pub fn out_neighbors(&self, layer: usize, u: usize) -> &VertexSet {
        &self.out[layer - 1][u]
    }

    /// In-neighbours of `v` in layer `layer` (1-based).
    pub fn in_neighbors(&self, layer: usize, v: usize) -> &VertexSet {
        &self.inc[layer - 1][v]
    }

    pub fn has_edge(&self, layer: usize, u: usize, v: usize) -> bool {
        self.out[layer - 1][u].contains(v)
    }

    /// Conflict edges as pairs `(u, v)` with `u < v`.
    pub fn conflict_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.conflicts[u].iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn layer_edges(&self, layer: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let out = &self.out[layer - 1];
        (0..self.n).flat_map(move |u| out[u].iter().map(move |v| (u, v)))
    }

    pub fn n_conflict_edges(&self) -> usize {
        self.conflicts.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    pub fn n_layer_edges(&self, layer: usize) -> usize {
        self.out[layer - 1].iter().map(VertexSet::len).sum()
    }

    pub fn is_independent(&self, s: &VertexSet) -> bool {
        s.iter().all(|u| !self.conflicts[u].intersects(s))
    }

    /// A vertex of `s` is good in `s` when every layer gives it an out-edge into `s`.
    pub fn is_good_in(&self, u: usize, s: &VertexSet) -> bool {
        self.out.iter().all(|layer| layer[u].intersects(s))
    }

    fn check_width(&self, s: &VertexSet) -> Result<()> {
        if s.width() != self.n {
            return Err(Error::WidthMismatch {
                expected: self.n,
                found: s.width(),
            });
        }
        Ok(())
    }

    /// Structural flags of the system.
    pub fn classify(&self) -> FragmentFlags {
        FragmentFlags {
            conflict_free: self.conflicts.iter().all(VertexSet::is_empty),
            uniquely_outgoing: self.out.iter().all(|layer| layer.iter().all(|s| s.len() <= 1)),
        }
    }
}

/// Mutable construction stage of a [`GraphSystem`].
#[derive(Debug, Clone)]
pub struct GraphSystemBuilder {
    n: usize,
    m: usize,
    conflicts: Vec<VertexSet>,
    out: Vec<Vec<VertexSet>>,
    labels: Option<Vec<String>>,
}

impl GraphSystemBuilder {
    pub fn new(n: usize, m: usize) -> Self {
        GraphSystemBuilder {
            n,
            m,
            conflicts: vec![VertexSet::empty(n); n],
            out: vec![vec![VertexSet::empty(n); n]; m],
            labels: None,
        }
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n_vertices: self.n,
            });
        }
        Ok(())
    }

    /// Adds the unordered conflict `{u, v}`; duplicates are idempotent.
    pub fn conflict(&mut self, u: usize, v: usize) -> Result<&mut Self> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::ConflictSelfLoop(u));
        }
        self.conflicts[u].insert(v);
        self.conflicts[v].insert(u);
        Ok(self)
    }

    /// Adds the directed edge `u -> v` to layer `layer` (1-based).
    pub fn edge(&mut self, layer: usize, u: usize, v: usize) -> Result<&mut Self> {
        if layer == 0 || layer > self.m {
            return Err(Error::LayerOutOfRange { layer, m: self.m });
        }
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        self.out[layer - 1][u].insert(v);
        Ok(self)
    }

    pub fn labels(&mut self, labels: Vec<String>) -> Result<&mut Self> {
        if labels.len() != self.n {
            return Err(Error::Usage(format!(
                "{} labels given for {} vertices",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn build(self) -> Result<GraphSystem> {
        if self.m == 0 {
            return Err(Error::NoLayers);
        }
        let n = self.n;
        let inc = self
            .out
            .iter()
            .map(|layer| {
                let mut inc = vec![VertexSet::empty(n); n];
                for (u, succ) in layer.iter().enumerate() {
                    for v in succ.iter() {
                        inc[v].insert(u);
                    }
                }
                inc
            })
            .collect();
        Ok(GraphSystem {
            n,
            m: self.m,
            conflicts: self.conflicts,
            out: self.out,
            inc,
            labels: self.labels,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FragmentFlags {
    pub conflict_free: bool,
    pub uniquely_outgoing: bool,
}

/// `true` iff `s` is non-empty, independent in `G0`, and every member is good in `s`.
pub fn verify_gis(g: &GraphSystem, s: &VertexSet) -> Result<bool> {
    g.check_width(s)?;
    Ok(!s.is_empty() && g.is_independent(s) && s.iter().all(|u| g.is_good_in(u, s)))
}

/// Why a vertex set fails to be a GIS.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GisViolation {
    Empty,
    Conflict(usize, usize),
    /// The vertex has no out-neighbour inside the set in this layer.
    Bad { vertex: usize, layer: usize },
}

impl std::fmt::Display for GisViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GisViolation::Empty => f.write_str("GIS must be non-empty"),
            GisViolation::Conflict(u, v) => write!(f, "vertices {u} and {v} conflict"),
            GisViolation::Bad { vertex, layer } => {
                write!(f, "vertex {vertex} has no successor in the set in layer {layer}")
            }
        }
    }
}

/// The first reason `s` is not a GIS, or `None` if it is one.
pub fn explain_gis(g: &GraphSystem, s: &VertexSet) -> Result<Option<GisViolation>> {
    g.check_width(s)?;
    if s.is_empty() {
        return Ok(Some(GisViolation::Empty));
    }
    for u in s.iter() {
        if let Some(v) = g.conflicts_of(u).iter_intersection(s).next() {
            return Ok(Some(GisViolation::Conflict(u.min(v), u.max(v))));
        }
        if let Some(layer) = (1..=g.m()).find(|&l| !g.out_neighbors(l, u).intersects(s)) {
            return Ok(Some(GisViolation::Bad { vertex: u, layer }));
        }
    }
    Ok(None)
}

/// A vertex set known to be a GIS of the system it was checked against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GisCertificate {
    vertices: VertexSet,
}

impl GisCertificate {
    /// Checks `vertices` with [`verify_gis`]; fails with a usage error if it is not a GIS.
    pub fn verified(g: &GraphSystem, vertices: VertexSet) -> Result<Self> {
        if verify_gis(g, &vertices)? {
            Ok(GisCertificate { vertices })
        } else {
            Err(Error::Usage("vertex set is not a good independent set".into()))
        }
    }

    pub(crate) fn trusted(g: &GraphSystem, vertices: VertexSet) -> Self {
        debug_assert!(verify_gis(g, &vertices).unwrap_or(false));
        GisCertificate { vertices }
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.vertices
    }

    pub fn into_vertices(self) -> VertexSet {
        self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Sat,
    Unsat,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Sat => "SAT",
            Verdict::Unsat => "UNSAT",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// Maximal independent set enumeration followed by pruning.
    A,
    /// Randomised LAS-VEGAS branching.
    B,
    BruteForce,
    ConflictFree,
    CycleM1,
    UniquelyOutgoing,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::A => "alg-a",
            Algorithm::B => "alg-b",
            Algorithm::BruteForce => "brute-force",
            Algorithm::ConflictFree => "conflict-free",
            Algorithm::CycleM1 => "cycle-m1",
            Algorithm::UniquelyOutgoing => "uniquely-outgoing",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub branches: u64,
    pub pruned_vertices: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub verdict: Verdict,
    pub certificate: Option<GisCertificate>,
    pub algorithm: Algorithm,
    pub stats: SolveStats,
}

impl SolveReport {
    pub(crate) fn new(g: &GraphSystem, found: Option<VertexSet>, algorithm: Algorithm, stats: SolveStats) -> Self {
        let certificate = found.map(|s| GisCertificate::trusted(g, s));
        SolveReport {
            verdict: if certificate.is_some() { Verdict::Sat } else { Verdict::Unsat },
            certificate,
            algorithm,
            stats,
        }
    }

    pub fn is_sat(&self) -> bool {
        self.verdict == Verdict::Sat
    }
}
