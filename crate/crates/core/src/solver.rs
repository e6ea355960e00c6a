//! Dispatch and the end-to-end formula pipeline.

use std::time::{Duration, Instant};

use crate::budget::Budget;
use crate::eq_elim::eliminate_equality;
use crate::error::{Error, Result};
use crate::fo2::{build_graph_system_with, CompileOptions, CompiledSystem, Snf, SnfNoEq};
use crate::graph_system::{
    brute_force, solve_a_with_budget, solve_b_with_budget, solve_conflict_free, solve_cycle_m1,
    solve_uniquely_outgoing, GraphSystem, SolveReport,
};
use crate::model::{check_model, extract_model, FiniteModel, ModelCheck};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AlgorithmChoice {
    /// Fragment fast path when the system allows one, ALGORITHM-B otherwise.
    #[default]
    Auto,
    A,
    B,
    BruteForce,
}

impl std::str::FromStr for AlgorithmChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(AlgorithmChoice::Auto),
            "a" => Ok(AlgorithmChoice::A),
            "b" => Ok(AlgorithmChoice::B),
            "brute" => Ok(AlgorithmChoice::BruteForce),
            _ => Err(Error::Usage(format!("unknown algorithm '{s}' (expected a, b, brute or auto)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolverOptions {
    pub algorithm: AlgorithmChoice,
    pub seed: u64,
    pub time_limit: Option<Duration>,
    pub compile: CompileOptions,
}

impl SolverOptions {
    fn budget(&self) -> Budget {
        self.time_limit.map_or_else(Budget::unlimited, Budget::with_time_limit)
    }
}

/// Solves a graph system; an exhausted budget surfaces as [`Error::BudgetExceeded`].
pub fn solve_system(g: &GraphSystem, opts: &SolverOptions) -> Result<SolveReport> {
    solve_with_budget(g, opts, opts.budget())
}

fn solve_with_budget(g: &GraphSystem, opts: &SolverOptions, budget: Budget) -> Result<SolveReport> {
    match opts.algorithm {
        AlgorithmChoice::A => solve_a_with_budget(g, budget),
        AlgorithmChoice::B => solve_b_with_budget(g, opts.seed, budget),
        AlgorithmChoice::BruteForce => brute_force(g),
        AlgorithmChoice::Auto => {
            let flags = g.classify();
            if flags.conflict_free && g.m() == 1 {
                solve_cycle_m1(g)
            } else if flags.conflict_free {
                solve_conflict_free(g)
            } else if flags.uniquely_outgoing {
                solve_uniquely_outgoing(g)
            } else {
                solve_b_with_budget(g, opts.seed, budget)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct FormulaOutcome {
    /// `true` when the input used equality and was rewritten first.
    pub eliminated_equality: bool,
    pub compiled: CompiledSystem,
    pub report: SolveReport,
    /// Present on SAT; it interprets the equality-free sentence that was compiled.
    pub model: Option<FiniteModel>,
    pub model_check: Option<ModelCheck>,
    pub compile_time: Duration,
}

impl FormulaOutcome {
    pub fn is_sat(&self) -> bool {
        self.report.is_sat()
    }
}

pub fn to_noeq(snf: &Snf) -> Result<(SnfNoEq, bool)> {
    match snf {
        Snf::NoEq(phi) => Ok((phi.clone(), false)),
        Snf::WithEq(psi) => Ok((eliminate_equality(psi)?, true)),
    }
}

/// Parse result in, verdict out: equality is eliminated if present, the
/// sentence is compiled and solved, and on SAT a model is extracted and
/// checked when `extract` is set.
pub fn solve_formula(snf: &Snf, opts: &SolverOptions, extract: bool) -> Result<FormulaOutcome> {
    let budget = opts.budget();
    let (phi, eliminated) = to_noeq(snf)?;
    let start = Instant::now();
    let compiled = build_graph_system_with(&phi, &opts.compile)?;
    let compile_time = start.elapsed();
    if budget.expired() {
        return Err(Error::BudgetExceeded);
    }
    let report = solve_with_budget(compiled.system(), opts, budget)?;
    let (model, model_check) = match (&report.certificate, extract) {
        (Some(cert), true) => {
            let mdl = extract_model(&compiled, cert)?;
            let check = check_model(compiled.formula(), &mdl)?;
            (Some(mdl), Some(check))
        }
        _ => (None, None),
    };
    Ok(FormulaOutcome {
        eliminated_equality: eliminated,
        compiled,
        report,
        model,
        model_check,
        compile_time,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchgen::{gen_exp_a, random_cis};
    use crate::fo2::parse_fo2;
    use crate::graph_system::{Algorithm, Verdict};

    #[test]
    fn auto_dispatch_picks_fragments() {
        let opts = SolverOptions::default();
        let cf1 = random_cis(5, 1, 0.0, 0.3, 1).unwrap();
        assert_eq!(solve_system(&cf1, &opts).unwrap().algorithm, Algorithm::CycleM1);
        let cf2 = random_cis(5, 2, 0.0, 0.3, 1).unwrap();
        assert_eq!(solve_system(&cf2, &opts).unwrap().algorithm, Algorithm::ConflictFree);
        let dense = random_cis(6, 2, 0.5, 0.6, 3).unwrap();
        assert_eq!(solve_system(&dense, &opts).unwrap().algorithm, Algorithm::B);
    }

    #[test]
    fn exp_a_small_verdicts_and_models() {
        for n in 2..=5 {
            let snf = Snf::NoEq(gen_exp_a(n).unwrap());
            let out = solve_formula(&snf, &SolverOptions::default(), true).unwrap();
            assert_eq!(out.report.verdict == Verdict::Sat, n % 2 == 0, "n = {n}");
            if let Some(check) = &out.model_check {
                assert!(check.holds());
            }
        }
    }

    #[test]
    fn equality_input_goes_through_elimination() {
        let text = "fo2 eq\nunary P\nbinary R\ngamma: P(x)\nforall_neq: P(x) & P(y) -> R(x,y)\nexists_neq: R\n";
        let out = solve_formula(&parse_fo2(text).unwrap(), &SolverOptions::default(), true).unwrap();
        assert!(out.eliminated_equality);
        assert!(out.is_sat());
        assert!(out.model_check.unwrap().holds());
    }
}
