use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph_system::{FragmentFlags, GraphSystem};
use crate::oracle::{first_model, AtomId, Expr, QfFormula};

use super::{OneType, SnfNoEq, TwoType};

/// How a 1-type is admitted as a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Admissibility {
    /// `α[y↦x]` holds under the type: `α` instantiated at `x = y`.
    #[default]
    Diagonal,
    /// Some 2-type makes `α` hold with the type on both variables. Kept for
    /// comparison runs; it does not constrain the diagonal and can admit
    /// types no element may carry.
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompileOptions {
    pub admissibility: Admissibility,
    /// Compilation fails with [`Error::TooLarge`] beyond this many vertices.
    pub max_vertices: usize,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            admissibility: Admissibility::Diagonal,
            max_vertices: 1 << 13,
        }
    }
}

/// The graph system of a sentence together with what is needed to turn a
/// good independent set back into a model.
#[derive(Debug, Clone)]
pub struct CompiledSystem {
    phi: SnfNoEq,
    system: GraphSystem,
    types: Vec<OneType>,
    witnesses: Vec<Vec<Vec<(usize, TwoType)>>>,
}

impl CompiledSystem {
    pub fn formula(&self) -> &SnfNoEq {
        &self.phi
    }

    pub fn system(&self) -> &GraphSystem {
        &self.system
    }

    pub fn into_system(self) -> GraphSystem {
        self.system
    }

    /// Vertex `v` stands for `types()[v]`; types are in ascending order.
    pub fn types(&self) -> &[OneType] {
        &self.types
    }

    pub fn vertex_of(&self, t: OneType) -> Option<usize> {
        self.types.binary_search(&t).ok()
    }

    /// The 2-type recorded for the layer edge `u → v` (layers from 1).
    pub fn witness(&self, layer: usize, u: usize, v: usize) -> Option<TwoType> {
        let row = &self.witnesses[layer - 1][u];
        row.binary_search_by_key(&v, |&(t, _)| t).ok().map(|i| row[i].1)
    }

    /// Smallest 2-type compatible with α in both orientations for the pair.
    pub fn filler(&self, u: usize, v: usize) -> Option<TwoType> {
        pair_compatible(&self.phi, self.types[u], self.types[v])
    }
}

struct Kernel<'a> {
    phi: &'a SnfNoEq,
    l: usize,
    cross_base: AtomId,
}

struct Row {
    ax: QfFormula,
    ay: QfFormula,
    bx: Vec<QfFormula>,
}

impl<'a> Kernel<'a> {
    fn new(phi: &'a SnfNoEq) -> Self {
        Kernel {
            phi,
            l: phi.table().one_literal_width(),
            cross_base: phi.table().cross_base(),
        }
    }

    fn on_x(&self, t: OneType) -> impl Fn(&AtomId) -> Option<bool> {
        let l = self.l;
        move |&id| (id < l).then(|| t.bit(id))
    }

    fn on_y(&self, t: OneType) -> impl Fn(&AtomId) -> Option<bool> {
        let l = self.l;
        move |&id| (l <= id && id < 2 * l).then(|| t.bit(id - l))
    }

    fn row(&self, p1: OneType) -> Row {
        Row {
            ax: self.phi.alpha().restrict(&self.on_x(p1)),
            ay: self.phi.alpha().restrict(&self.on_y(p1)),
            bx: self.phi.betas().iter().map(|b| b.restrict(&self.on_x(p1))).collect(),
        }
    }

    /// `α(π1, π2, η) ∧ α(π2, π1, reverse η)` as a formula over the bits of `η`.
    fn pair(&self, row: &Row, p2: OneType) -> Expr<usize> {
        let base = self.cross_base;
        let forward = row.ax.restrict(&self.on_y(p2));
        if forward == Expr::False {
            return Expr::False;
        }
        let backward = row.ay.restrict(&self.on_x(p2));
        if backward == Expr::False {
            return Expr::False;
        }
        Expr::And(vec![
            forward.map_atoms(&|&id| id - base),
            backward.map_atoms(&|&id| (id - base) ^ 1),
        ])
        .simplify()
    }

    fn beta(&self, row: &Row, layer: usize, p2: OneType, pair: &Expr<usize>) -> Option<TwoType> {
        let base = self.cross_base;
        let b = row.bx[layer].restrict(&self.on_y(p2));
        if b == Expr::False {
            return None;
        }
        let f = Expr::And(vec![pair.clone(), b.map_atoms(&|&id| id - base)]);
        first_model(&f, self.phi.table().n_cross()).map(TwoType)
    }

    fn n_cross(&self) -> usize {
        self.phi.table().n_cross()
    }
}

/// A 2-type `η` such that `α` holds both for `(π1, η, π2)` and for
/// `(π2, reverse η, π1)`; the numerically smallest one is returned.
pub fn pair_compatible(phi: &SnfNoEq, p1: OneType, p2: OneType) -> Option<TwoType> {
    let k = Kernel::new(phi);
    let pair = k.pair(&k.row(p1), p2);
    first_model(&pair, k.n_cross()).map(TwoType)
}

/// As [`pair_compatible`], additionally requiring `β_layer(x,y)` in the forward
/// orientation. Layers are numbered from 1.
pub fn beta_compatible(phi: &SnfNoEq, layer: usize, p1: OneType, p2: OneType) -> Option<TwoType> {
    assert!((1..=phi.m()).contains(&layer), "layer {layer} out of range");
    let k = Kernel::new(phi);
    let row = k.row(p1);
    let pair = k.pair(&row, p2);
    if pair == Expr::False {
        return None;
    }
    k.beta(&row, layer - 1, p2, &pair)
}

pub fn enumerate_admissible_types(phi: &SnfNoEq) -> Result<Vec<OneType>> {
    enumerate_admissible_types_with(phi, &CompileOptions::default())
}

/// Admissible 1-types in ascending numeric order.
pub fn enumerate_admissible_types_with(phi: &SnfNoEq, opts: &CompileOptions) -> Result<Vec<OneType>> {
    let table = phi.table();
    let l = table.one_literal_width();
    let start = match opts.admissibility {
        Admissibility::Diagonal => phi
            .alpha()
            .substitute(&|&id| Expr::Atom(table.id(&table.atom(id).diagonal()).expect("diagonal atom"))),
        Admissibility::Literal => phi.alpha().clone(),
    };
    let literal = opts.admissibility == Admissibility::Literal;
    let mut out = Vec::new();
    let mut search = TypeSearch {
        l,
        literal,
        base: table.cross_base(),
        n_cross: table.n_cross(),
        max: opts.max_vertices,
        out: &mut out,
    };
    search.dfs(start.simplify(), l, 0)?;
    Ok(out)
}

struct TypeSearch<'a> {
    l: usize,
    literal: bool,
    base: AtomId,
    n_cross: usize,
    max: usize,
    out: &'a mut Vec<OneType>,
}

impl TypeSearch<'_> {
    /// Bits at positions `>= remaining` are fixed in `prefix`; the highest
    /// open bit is decided first, `false` before `true`.
    fn dfs(&mut self, f: QfFormula, remaining: usize, prefix: u128) -> Result<()> {
        if f == Expr::False {
            return Ok(());
        }
        if f == Expr::True && remaining > 0 {
            if remaining >= 64 || self.out.len() + (1usize << remaining) > self.max {
                return Err(self.too_large());
            }
            self.out.extend((0..1u128 << remaining).map(|low| OneType(prefix | low)));
            return Ok(());
        }
        if remaining == 0 {
            let ok = if self.literal {
                let base = self.base;
                first_model(&f.map_atoms(&|&id| id - base), self.n_cross).is_some()
            } else {
                f == Expr::True
            };
            if ok {
                if self.out.len() == self.max {
                    return Err(self.too_large());
                }
                self.out.push(OneType(prefix));
            }
            return Ok(());
        }
        let bit = remaining - 1;
        let (l, literal) = (self.l, self.literal);
        for value in [false, true] {
            let g = f.restrict(&|&id| (id == bit || (literal && id == l + bit)).then_some(value));
            self.dfs(g, bit, prefix | (u128::from(value) << bit))?;
        }
        Ok(())
    }

    fn too_large(&self) -> Error {
        Error::TooLarge(format!("more than {} admissible 1-types", self.max))
    }
}

pub fn build_graph_system(phi: &SnfNoEq) -> Result<CompiledSystem> {
    build_graph_system_with(phi, &CompileOptions::default())
}

/// Vertices are the admissible 1-types; `{π1, π2}` is a conflict when no
/// 2-type is compatible with α in both orientations, and `π1 → π2` is a
/// layer-`i` edge when some such 2-type also satisfies `βᵢ`.
pub fn build_graph_system_with(phi: &SnfNoEq, opts: &CompileOptions) -> Result<CompiledSystem> {
    let types = enumerate_admissible_types_with(phi, opts)?;
    let n = types.len();
    let m = phi.m();
    let kernel = Kernel::new(phi);

    struct RowOut {
        conflicts: Vec<usize>,
        edges: Vec<Vec<(usize, TwoType)>>,
    }
    let rows: Vec<RowOut> = types
        .par_iter()
        .enumerate()
        .map(|(u, &p1)| {
            let row = kernel.row(p1);
            let mut out = RowOut {
                conflicts: Vec::new(),
                edges: vec![Vec::new(); m],
            };
            for (v, &p2) in types.iter().enumerate() {
                let pair = kernel.pair(&row, p2);
                if first_model(&pair, kernel.n_cross()).is_none() {
                    if v > u {
                        out.conflicts.push(v);
                    }
                    continue;
                }
                for (layer, edges) in out.edges.iter_mut().enumerate() {
                    if let Some(eta) = kernel.beta(&row, layer, p2, &pair) {
                        edges.push((v, eta));
                    }
                }
            }
            out
        })
        .collect();

    let mut b = GraphSystem::builder(n, m);
    let mut witnesses = vec![vec![Vec::new(); n]; m];
    for (u, row) in rows.into_iter().enumerate() {
        for v in row.conflicts {
            b.conflict(u, v)?;
        }
        for (layer, edges) in row.edges.into_iter().enumerate() {
            for &(v, _) in &edges {
                b.edge(layer + 1, u, v)?;
            }
            witnesses[layer][u] = edges;
        }
    }
    b.labels(types.iter().map(|t| t.render(phi.vocab())).collect())?;
    Ok(CompiledSystem {
        phi: phi.clone(),
        system: b.build()?,
        types,
        witnesses,
    })
}

pub fn classify_formula(phi: &SnfNoEq) -> Result<FragmentFlags> {
    Ok(build_graph_system(phi)?.system().classify())
}

#[cfg(test)]
mod tests {
    use super::super::{parse_fo2, Snf};
    use super::*;

    fn noeq(text: &str) -> SnfNoEq {
        match parse_fo2(text).unwrap() {
            Snf::NoEq(f) => f,
            Snf::WithEq(_) => unreachable!(),
        }
    }

    #[test]
    fn all_types_when_alpha_is_true() {
        let phi = noeq("fo2 noeq\nunary A B\nexists: true\n");
        let types = enumerate_admissible_types(&phi).unwrap();
        assert_eq!(types, (0..4).map(OneType).collect::<Vec<_>>());
    }

    #[test]
    fn diagonal_substitution_filters_types() {
        let phi = noeq("fo2 noeq\nunary U\nforall: ~U(x)\nexists: true\n");
        assert_eq!(enumerate_admissible_types(&phi).unwrap(), vec![OneType(0)]);
        let phi = noeq("fo2 noeq\nunary U\nbinary R\nforall: R(x,y) -> U(y)\nexists: true\n");
        let types = enumerate_admissible_types(&phi).unwrap();
        // R(x,x) forces U(x): bit 0 is U, bit 1 is R(x,x).
        assert_eq!(types, vec![OneType(0b00), OneType(0b01), OneType(0b11)]);
    }

    #[test]
    fn literal_reading_is_weaker() {
        let phi = noeq("fo2 noeq\nunary U\nbinary R\nforall: R(x,y) -> U(y)\nexists: true\n");
        let opts = CompileOptions {
            admissibility: Admissibility::Literal,
            ..CompileOptions::default()
        };
        assert_eq!(enumerate_admissible_types_with(&phi, &opts).unwrap().len(), 4);
    }

    #[test]
    fn compatibility_examples() {
        let phi = noeq("fo2 noeq\nunary U\nbinary R\nexists: R(x,y)\n");
        assert_eq!(pair_compatible(&phi, OneType(0), OneType(3)), Some(TwoType(0)));
        assert_eq!(beta_compatible(&phi, 1, OneType(0), OneType(1)), Some(TwoType(1)));
        let asym = noeq("fo2 noeq\nunary U\nbinary R\nforall: R(x,y) & ~R(y,x)\nexists: true\n");
        assert_eq!(pair_compatible(&asym, OneType(0), OneType(0)), None);
        let blocked = noeq("fo2 noeq\nunary U\nbinary R\nforall: ~R(x,y)\nexists: R(x,y)\n");
        assert_eq!(beta_compatible(&blocked, 1, OneType(0), OneType(0)), None);
    }

    #[test]
    fn build_simple_system() {
        let phi = noeq("fo2 noeq\nunary U\nexists: U(y)\n");
        let cs = build_graph_system(&phi).unwrap();
        let g = cs.system();
        assert_eq!(g.n_vertices(), 2);
        assert_eq!(g.n_conflict_edges(), 0);
        let mut edges: Vec<_> = g.layer_edges(1).collect();
        edges.sort();
        assert_eq!(edges, vec![(0, 1), (1, 1)]);
        assert_eq!(cs.witness(1, 0, 1), Some(TwoType(0)));
        assert_eq!(cs.witness(1, 0, 0), None);
        assert_eq!(g.labels().unwrap()[1], "U");
    }

    #[test]
    fn conflicts_are_symmetric() {
        let phi = noeq("fo2 noeq\nunary A B\nbinary R\nforall: (A(x) & B(y) -> R(x,y)) & (R(x,y) -> ~R(y,x)) & (A(x) & A(y) -> false)\nexists: true\n");
        let cs = build_graph_system(&phi).unwrap();
        for (i, &p) in cs.types().iter().enumerate() {
            for (j, &q) in cs.types().iter().enumerate() {
                let a = pair_compatible(&phi, p, q);
                let b = pair_compatible(&phi, q, p);
                assert_eq!(a.is_some(), b.is_some());
                assert_eq!(a.is_none() && i != j, cs.system().conflicting(i, j));
            }
        }
    }

    #[test]
    fn unsatisfiable_alpha_gives_empty_system() {
        let phi = noeq("fo2 noeq\nunary U\nforall: false\nexists: true\n");
        let cs = build_graph_system(&phi).unwrap();
        assert_eq!(cs.system().n_vertices(), 0);
    }

    #[test]
    fn vertex_cap() {
        let phi = noeq("fo2 noeq\nunary A B C D\nexists: true\n");
        let opts = CompileOptions {
            max_vertices: 10,
            ..CompileOptions::default()
        };
        assert!(matches!(build_graph_system_with(&phi, &opts), Err(Error::TooLarge(_))));
    }
}
