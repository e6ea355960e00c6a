use super::Expr;

/// Largest variable count handled by truth-table sweeps.
pub const TRUTH_TABLE_LIMIT: usize = 16;

const LANES: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Smallest satisfying assignment of `f`, read as a binary number whose bit
/// `v` is the value of variable `v`. Atoms must lie in `0..nvars`, `nvars <= 64`.
///
/// Up to [`TRUTH_TABLE_LIMIT`] variables the truth table is swept 64 rows at a
/// time; beyond that a backtracking search with unit propagation is used.
pub fn first_model(f: &Expr<usize>, nvars: usize) -> Option<u64> {
    assert!(nvars <= 64, "at most 64 variables");
    match f.as_constant() {
        Some(false) => return None,
        Some(true) => return Some(0),
        None => {}
    }
    if nvars <= TRUTH_TABLE_LIMIT {
        truth_table(f, nvars)
    } else {
        let mut values = vec![None; nvars];
        backtrack(f.clone(), &mut values).then(|| {
            values
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, v)| acc | (u64::from(v.unwrap_or(false)) << i))
        })
    }
}

fn truth_table(f: &Expr<usize>, nvars: usize) -> Option<u64> {
    let valid = if nvars >= 6 { !0u64 } else { (1u64 << (1 << nvars)) - 1 };
    let chunks = 1u64 << nvars.saturating_sub(6);
    for chunk in 0..chunks {
        let lane = |&v: &usize| {
            if v < 6 {
                LANES[v]
            } else if chunk >> (v - 6) & 1 == 1 {
                !0
            } else {
                0
            }
        };
        let hits = f.eval_mask(&lane) & valid;
        if hits != 0 {
            return Some(chunk * 64 + u64::from(hits.trailing_zeros()));
        }
    }
    None
}

/// Depth-first search, highest variable first and `false` before `true`, so the
/// first model found is the numerically smallest.
fn backtrack(f: Expr<usize>, values: &mut [Option<bool>]) -> bool {
    let mut f = f;
    let mut forced = Vec::new();
    loop {
        f = f.restrict(&|&v| values[v]);
        if let Some(b) = f.as_constant() {
            if !b {
                forced.iter().for_each(|&v: &usize| values[v] = None);
            }
            return b;
        }
        let units = unit_literals(&f);
        if units.is_empty() {
            break;
        }
        for (v, b) in units {
            match values[v] {
                Some(old) if old != b => {
                    forced.iter().for_each(|&v: &usize| values[v] = None);
                    return false;
                }
                Some(_) => {}
                None => {
                    values[v] = Some(b);
                    forced.push(v);
                }
            }
        }
    }
    let mut branch = None;
    f.for_each_atom(&mut |&v| {
        if values[v].is_none() && branch.is_none_or(|b| v > b) {
            branch = Some(v);
        }
    });
    let v = branch.expect("non-constant formula has an unassigned atom");
    for b in [false, true] {
        values[v] = Some(b);
        if backtrack(f.clone(), values) {
            return true;
        }
    }
    values[v] = None;
    forced.iter().for_each(|&v| values[v] = None);
    false
}

fn unit_literals(f: &Expr<usize>) -> Vec<(usize, bool)> {
    fn literal(e: &Expr<usize>) -> Option<(usize, bool)> {
        match e {
            Expr::Atom(v) => Some((*v, true)),
            Expr::Not(inner) => match inner.as_ref() {
                Expr::Atom(v) => Some((*v, false)),
                _ => None,
            },
            _ => None,
        }
    }
    match f {
        Expr::And(items) => items.iter().filter_map(literal).collect(),
        other => literal(other).into_iter().collect(),
    }
}
