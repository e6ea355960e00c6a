use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::fo2::{CompiledSystem, TwoType};
use crate::graph_system::GisCertificate;

use super::FiniteModel;

/// Builds a model of the compiled sentence from a good independent set `Γ`.
///
/// The universe is `Γ × {0,1,2} × {0..m}`. Element `(g, c, j)` meets its
/// requirement `i` at `(s_i(g), c+1 mod 3, i)`, where `s_i(g)` is the first
/// layer-`i` successor of `g` inside `Γ`, using the recorded witness 2-type. A
/// pair never receives two such demands: the copy index only moves forward and
/// the last coordinate names the requirement. All other pairs get the smallest
/// 2-type compatible with α both ways.
pub fn extract_model(cs: &CompiledSystem, gis: &GisCertificate) -> Result<FiniteModel> {
    let g = cs.system();
    if !crate::graph_system::verify_gis(g, gis.vertices())? {
        return Err(Error::Usage("certificate is not a good independent set".into()));
    }
    let gamma = gis.vertices().to_vec();
    let m = g.m();
    let phi = cs.formula();
    let size = gamma.len() * 3 * m;
    let elem = |gi: usize, c: usize, j: usize| (gi * 3 + c) * m + j;
    let pos: HashMap<usize, usize> = gamma.iter().enumerate().map(|(i, &v)| (v, i)).collect();

    let mut mdl = FiniteModel::new(size, phi.vocab().unary().len(), phi.vocab().binary().len());
    let vertex_of = |e: usize| gamma[e / (3 * m)];
    for e in 0..size {
        mdl.set_one_type(e, cs.types()[vertex_of(e)]);
    }

    // demand[(a, b)] with a the requesting element.
    let mut demands: HashMap<(usize, usize), TwoType> = HashMap::new();
    for (gi, &u) in gamma.iter().enumerate() {
        for layer in 1..=m {
            let v = g
                .out_neighbors(layer, u)
                .iter()
                .find(|v| pos.contains_key(v))
                .expect("verified GIS has a successor in every layer");
            let eta = cs.witness(layer, u, v).expect("layer edge has a witness");
            for c in 0..3 {
                for j in 0..m {
                    let a = elem(gi, c, j);
                    let b = elem(pos[&v], (c + 1) % 3, layer - 1);
                    demands.insert((a, b), eta);
                }
            }
        }
    }

    let mut fillers: HashMap<(usize, usize), TwoType> = HashMap::new();
    for a in 0..size {
        for b in a + 1..size {
            let eta = if let Some(&eta) = demands.get(&(a, b)) {
                eta
            } else if let Some(&eta) = demands.get(&(b, a)) {
                eta.reverse()
            } else {
                let (u, v) = (vertex_of(a), vertex_of(b));
                *fillers.entry((u, v)).or_insert_with(|| {
                    cs.filler(u, v).expect("members of an independent set are compatible")
                })
            };
            mdl.set_two_type(a, b, eta);
        }
    }
    Ok(mdl)
}
