use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use fo2cis::benchgen::{self, GenSpec};
use fo2cis::fo2::{classify_formula, parse_fo2, write_fo2, Snf};
use fo2cis::graph_system::{
    explain_gis, parse_certificate, parse_cis, verify_gis, write_certificate, write_cis, FragmentFlags, SolveReport,
};
use fo2cis::model::{check_model, check_model_eq, parse_model, write_model, ModelCheck};
use fo2cis::solver::{solve_formula, solve_system, to_noeq, AlgorithmChoice, SolverOptions};
use fo2cis::{Error, GraphSystem};

const EXIT_SAT: u8 = 10;
const EXIT_UNSAT: u8 = 20;
const EXIT_ERROR: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_REFUTED: u8 = 3;

#[derive(Parser)]
#[command(name = "fo2cis", version, about = "FO² satisfiability through conditional independent sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a `.fo2` sentence or a `.cis` instance.
    Solve(SolveArgs),
    /// Rewrite a `.fo2` sentence without equality, or compile it to `.cis`.
    Reduce {
        input: PathBuf,
        #[arg(long, value_enum)]
        to: ReduceTarget,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a model against a `.fo2` sentence, or a certificate against a `.cis` instance.
    Check { input: PathBuf, witness: PathBuf },
    /// Generate a benchmark or reduction instance.
    Gen(GenArgs),
    /// Report the tractable-fragment flags of an instance.
    Classify { input: PathBuf },
}

#[derive(clap::Args)]
struct SolveArgs {
    input: PathBuf,
    #[arg(long, default_value = "auto", value_parser = parse_alg)]
    alg: AlgorithmChoice,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Write the extracted model here (checked before exiting).
    #[arg(long)]
    emit_model: Option<PathBuf>,
    /// Write the compiled graph system here.
    #[arg(long)]
    emit_cis: Option<PathBuf>,
    /// Write the GIS certificate here.
    #[arg(long)]
    emit_certificate: Option<PathBuf>,
    /// Re-check the certificate independently; for formulas also extract and check a model.
    #[arg(long)]
    verify: bool,
    /// `key=value` statistics lines instead of prose.
    #[arg(long)]
    machine: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReduceTarget {
    Noeq,
    Cis,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Family {
    ExpA,
    ExpB,
    ExpC,
    ExpD,
    FromCnf,
    FromIndependentSet,
    FromAlternatingGraph,
    RandomCis,
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(value_enum)]
    family: Family,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Layers (random_cis).
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, default_value_t = 0.2)]
    p_conflict: f64,
    #[arg(long, default_value_t = 0.2)]
    p_layer: f64,
    /// Independent set size (from_independent_set).
    #[arg(long)]
    k: Option<usize>,
    /// Source file for the reductions.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Also write the underlying graph system (exp_b, exp_d).
    #[arg(long)]
    emit_cis: Option<PathBuf>,
}

fn parse_alg(s: &str) -> Result<AlgorithmChoice, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Input {
    Fo2(Snf),
    Cis(GraphSystem),
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write_out(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> anyhow::Result<Input> {
    let text = read(path)?;
    let is_fo2 = match path.extension().and_then(|e| e.to_str()) {
        Some("fo2") => true,
        Some("cis") => false,
        _ => text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#') && !l.starts_with("c ") && *l != "c")
            .is_some_and(|l| l.starts_with("fo2")),
    };
    let name = path.display();
    if is_fo2 {
        Ok(Input::Fo2(parse_fo2(&text).with_context(|| format!("{name}"))?))
    } else {
        Ok(Input::Cis(parse_cis(&text).with_context(|| format!("{name}"))?))
    }
}

fn print_report(report: &SolveReport, g: &GraphSystem, machine: bool, extra: &[(&str, String)]) {
    println!("{}", report.verdict);
    let size = report.certificate.as_ref().map_or(0, |c| c.len());
    if machine {
        println!("algorithm={}", report.algorithm.name());
        println!("vertices={}", g.n_vertices());
        println!("layers={}", g.m());
        println!("branches={}", report.stats.branches);
        println!("pruned={}", report.stats.pruned_vertices);
        println!("certificate_size={size}");
        for (k, v) in extra {
            println!("{k}={v}");
        }
    } else {
        println!(
            "algorithm {} on {} vertices, {} layers: {} branches, {} pruned, {:.3?}",
            report.algorithm.name(),
            g.n_vertices(),
            g.m(),
            report.stats.branches,
            report.stats.pruned_vertices,
            report.stats.elapsed
        );
        if report.certificate.is_some() {
            println!("certificate of {size} vertices");
        }
        for (k, v) in extra {
            println!("{}: {v}", k.replace('_', " "));
        }
    }
}

fn cmd_solve(args: SolveArgs) -> anyhow::Result<u8> {
    let opts = SolverOptions {
        algorithm: args.alg,
        seed: args.seed,
        time_limit: match args.time_limit {
            Some(t) if !(t.is_finite() && t >= 0.0) => bail!("--time-limit must be a non-negative number of seconds"),
            t => t.map(Duration::from_secs_f64),
        },
        ..SolverOptions::default()
    };
    let input = load(&args.input)?;
    let result = match &input {
        Input::Cis(g) => solve_system(g, &opts).map(|r| (r, None)),
        Input::Fo2(snf) => solve_formula(snf, &opts, args.emit_model.is_some() || args.verify).map(|o| {
            let r = o.report.clone();
            (r, Some(o))
        }),
    };
    let (report, outcome) = match result {
        Err(Error::BudgetExceeded) => {
            println!("UNKNOWN");
            if args.machine {
                println!("reason=budget-exceeded");
            } else {
                println!("resource budget exceeded before a verdict");
            }
            return Ok(EXIT_BUDGET);
        }
        other => other?,
    };
    let g = match (&input, &outcome) {
        (Input::Cis(g), _) => g,
        (_, Some(o)) => o.compiled.system(),
        _ => unreachable!(),
    };
    let mut extra = Vec::new();
    if let Some(o) = &outcome {
        extra.push(("equality_eliminated", o.eliminated_equality.to_string()));
    }
    if args.verify {
        if let Some(cert) = &report.certificate {
            let ok = verify_gis(g, cert.vertices())?;
            if !ok {
                bail!("internal error: certificate failed verification");
            }
            extra.push(("certificate_verified", ok.to_string()));
        }
    }
    if let Some(o) = &outcome {
        if let (Some(mdl), Some(check)) = (&o.model, &o.model_check) {
            if let ModelCheck::Violated(v) = check {
                bail!("internal error: extracted model fails the check: {v}");
            }
            extra.push(("model_size", mdl.size().to_string()));
            extra.push(("model_checked", "true".to_string()));
        }
    }
    print_report(&report, g, args.machine, &extra);

    if let Some(path) = &args.emit_cis {
        fs::write(path, write_cis(g, &[])).with_context(|| format!("cannot write {}", path.display()))?;
    }
    if let (Some(path), Some(cert)) = (&args.emit_certificate, &report.certificate) {
        fs::write(path, write_certificate(cert.vertices()))
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    if let Some(path) = &args.emit_model {
        match &outcome {
            None => eprintln!("warning: --emit-model only applies to .fo2 inputs"),
            Some(o) => {
                if let Some(mdl) = &o.model {
                    let text = write_model(mdl, o.compiled.formula().vocab())?;
                    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
                }
            }
        }
    }
    Ok(if report.is_sat() { EXIT_SAT } else { EXIT_UNSAT })
}

fn cmd_reduce(input: &Path, to: ReduceTarget, output: Option<&Path>) -> anyhow::Result<u8> {
    let text = read(input)?;
    let snf = parse_fo2(&text).with_context(|| format!("{}", input.display()))?;
    match to {
        ReduceTarget::Noeq => match &snf {
            Snf::NoEq(_) => {
                eprintln!("warning: {} is already equality-free; output is unchanged", input.display());
                write_out(output, &text)?;
            }
            Snf::WithEq(_) => {
                let (phi, _) = to_noeq(&snf)?;
                let header = vec![format!("equality eliminated from {}", file_name(input))];
                write_out(output, &write_fo2(&Snf::NoEq(phi), &header))?;
            }
        },
        ReduceTarget::Cis => {
            let (phi, _) = to_noeq(&snf)?;
            let cs = fo2cis::fo2::build_graph_system(&phi)?;
            let header = vec![format!("compiled from {}", file_name(input))];
            write_out(output, &write_cis(cs.system(), &header))?;
        }
    }
    Ok(0)
}

fn cmd_check(input: &Path, witness: &Path) -> anyhow::Result<u8> {
    let text = read(witness)?;
    match load(input)? {
        Input::Cis(g) => {
            let s = parse_certificate(&text, g.n_vertices()).with_context(|| format!("{}", witness.display()))?;
            match explain_gis(&g, &s)? {
                None => {
                    println!("PASS");
                    Ok(0)
                }
                Some(v) => {
                    println!("REFUTED: {v}");
                    Ok(EXIT_REFUTED)
                }
            }
        }
        Input::Fo2(snf) => {
            let check = match &snf {
                Snf::NoEq(phi) => check_model(phi, &parse_model(&text, phi.vocab())?)?,
                Snf::WithEq(psi) => match parse_model(&text, psi.vocab()) {
                    Ok(mdl) => check_model_eq(psi, &mdl)?,
                    // Models emitted by `solve` interpret the equality-free rewrite.
                    Err(first) => {
                        let (phi, _) = to_noeq(&snf)?;
                        let mdl = parse_model(&text, phi.vocab()).map_err(|_| first)?;
                        check_model(&phi, &mdl)?
                    }
                },
            };
            match check {
                ModelCheck::Holds => {
                    println!("PASS");
                    Ok(0)
                }
                ModelCheck::Violated(v) => {
                    println!("REFUTED: {v}");
                    Ok(EXIT_REFUTED)
                }
            }
        }
    }
}

fn file_name(path: &Path) -> String {
    path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

fn cmd_gen(a: GenArgs) -> anyhow::Result<u8> {
    let need_n = || a.n.context("--n is required for this family");
    let source = || -> anyhow::Result<(String, String)> {
        let p = a.input.as_deref().context("--in is required for this family")?;
        Ok((file_name(p), read(p)?))
    };
    let (spec, text, side): (GenSpec, String, Option<GraphSystem>) = match a.family {
        Family::ExpA => {
            let spec = GenSpec::ExpA { n: need_n()? };
            let phi = benchgen::gen_exp_a(need_n()?)?;
            let t = write_fo2(&Snf::NoEq(phi), &spec.header());
            (spec, t, None)
        }
        Family::ExpB => {
            let n = need_n()?;
            let spec = GenSpec::ExpB { n };
            let t = write_fo2(&Snf::NoEq(benchgen::gen_exp_b(n)?), &spec.header());
            (spec, t, Some(benchgen::gen_exp_b_graph(n)?))
        }
        Family::ExpC => {
            let spec = GenSpec::ExpC { n: need_n()? };
            let t = write_fo2(&Snf::WithEq(benchgen::gen_exp_c(need_n()?)?), &spec.header());
            (spec, t, None)
        }
        Family::ExpD => {
            let spec = GenSpec::ExpD { n: need_n()?, seed: a.seed };
            let d = benchgen::gen_exp_d(need_n()?, a.seed)?;
            let t = write_fo2(&Snf::NoEq(d.formula), &spec.header());
            (spec, t, Some(d.system))
        }
        Family::FromCnf => {
            let (name, src) = source()?;
            let spec = GenSpec::FromCnf { source: name };
            let g = benchgen::from_cnf(&benchgen::parse_dimacs_cnf(&src)?)?;
            (spec.clone(), write_cis(&g, &spec.header()), None)
        }
        Family::FromIndependentSet => {
            let (name, src) = source()?;
            let k = a.k.context("--k is required for from_independent_set")?;
            let spec = GenSpec::FromIndependentSet { source: name, k };
            let g = benchgen::from_independent_set(&benchgen::parse_dimacs_graph(&src)?, k)?;
            (spec.clone(), write_cis(&g, &spec.header()), None)
        }
        Family::FromAlternatingGraph => {
            let (name, src) = source()?;
            let spec = GenSpec::FromAlternatingGraph { source: name };
            let (ag, s, t) = benchgen::parse_alternating_graph(&src)?;
            let g = benchgen::from_alternating_graph(&ag, s, t)?;
            (spec.clone(), write_cis(&g, &spec.header()), None)
        }
        Family::RandomCis => {
            let spec = GenSpec::RandomCis {
                n: need_n()?,
                m: a.m,
                p_conflict: a.p_conflict,
                p_layer: a.p_layer,
                seed: a.seed,
            };
            let g = benchgen::random_cis(need_n()?, a.m, a.p_conflict, a.p_layer, a.seed)?;
            (spec.clone(), write_cis(&g, &spec.header()), None)
        }
    };
    write_out(a.output.as_deref(), &text)?;
    if let Some(path) = &a.emit_cis {
        let g = side.context("--emit-cis applies to exp_b and exp_d only")?;
        fs::write(path, write_cis(&g, &spec.header())).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(0)
}

fn print_flags(flags: FragmentFlags, n: usize, m: usize) {
    println!("vertices={n}");
    println!("layers={m}");
    println!("conflict_free={}", flags.conflict_free);
    println!("uniquely_outgoing={}", flags.uniquely_outgoing);
}

fn cmd_classify(input: &Path) -> anyhow::Result<u8> {
    match load(input)? {
        Input::Cis(g) => print_flags(g.classify(), g.n_vertices(), g.m()),
        Input::Fo2(snf) => {
            let (phi, _) = to_noeq(&snf)?;
            let flags = classify_formula(&phi)?;
            let cs = fo2cis::fo2::build_graph_system(&phi)?;
            print_flags(flags, cs.system().n_vertices(), cs.system().m());
        }
    }
    Ok(0)
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Reduce { input, to, output } => cmd_reduce(&input, to, output.as_deref()),
        Command::Check { input, witness } => cmd_check(&input, &witness),
        Command::Gen(args) => cmd_gen(args),
        Command::Classify { input } => cmd_classify(&input),
    }
}

fn main() -> ExitCode {
    // Exit code 2 is reserved for an exhausted budget, so usage errors exit with 1.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
