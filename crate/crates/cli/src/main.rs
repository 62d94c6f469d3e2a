//! `dlab`: generate instances, run the engines, verify and transform proofs,
//! compute closures and reproduce the separation table.
//!
//! Exit status: 0 on success or an accepted proof, 1 when a proof is rejected
//! or a bound has no proof, 2 on usage or input errors.

mod experiment;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use dlab::closures::{iterated_closure, rank};
use dlab::disjunctions::{var, DisjunctionFamily, IntegralityPattern};
use dlab::engine::{
    min_bb_tree_size, run_bb, run_bc, run_cp, BcRule, BranchRule, CutRule, Instance, NodeSelect, RunConfig, StopRule,
};
use dlab::format::{instance_from_json, instance_to_json, proof_from_json, proof_to_json};
use dlab::instances::{
    gen_b_cross_cube, gen_center_variant, gen_k3_copies, gen_km_copies_alpha, gen_reverse_split, gen_tetra_h,
    random_01_polytope,
};
use dlab::kernel::enumerate_vertices;
use dlab::proofs::{verify, Proof};
use dlab::scalar::{format_exact, parse_exact};
use dlab::transforms::{bc_to_cp, cp_to_bb};
use dlab::{Inequality, Rational};

#[derive(Parser)]
#[command(name = "dlab", version, about = "Exact laboratory for branch-and-bound and cutting-plane proofs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Run an engine and write its proof.
    Solve(SolveArgs),
    /// Check a proof against an instance.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        proof: PathBuf,
    },
    /// Convert between proof systems.
    Transform {
        #[arg(value_enum)]
        kind: TransformKind,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Iterated disjunctive closure; writes the last round as an instance.
    Closure {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value = "variable")]
        family: String,
        #[arg(long, default_value_t = 1)]
        rounds: usize,
        #[arg(long)]
        out: PathBuf,
        /// Also write `round,bound,vertices` for every round.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Closure rank of an inequality given as "a1,a2,...;b".
    Rank {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        ineq: String,
        #[arg(long, default_value = "variable")]
        family: String,
        #[arg(long, default_value_t = 10)]
        cap: usize,
    },
    /// Smallest branch-and-bound tree proving `<c, x> <= gamma` on a 0/1 instance.
    Minbb {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        gamma: String,
    },
    /// Reproduce a results table as CSV.
    Experiment {
        #[arg(value_enum)]
        which: ExperimentKind,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// m disjoint triangles.
    K3copies {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// m triangles plus a center vertex joined to the listed vertices.
    Center {
        #[arg(long)]
        m: usize,
        /// Comma-separated 0-based triangle vertices adjacent to the center.
        #[arg(long, default_value = "")]
        center_edges: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// m copies of K_m with sparse cross edges.
    Kmalpha {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        alpha: String,
        /// Comma-separated "u-v" pairs of 0-based vertices.
        #[arg(long, default_value = "")]
        cross_edges: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// The B polytope times the unit cube.
    Bcube {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tetrahedron of height h.
    Tetra {
        #[arg(long)]
        h: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tetrahedron with apex above the split.
    Revsplit {
        #[arg(long)]
        h: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Seeded random polytope inside the unit cube.
    Rand01 {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Cp,
    Bb,
    Bc,
}

#[derive(Clone, Copy, ValueEnum)]
enum TransformKind {
    Bc2cp,
    Cp2bb,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentKind {
    Table1,
}

#[derive(Clone, Copy, ValueEnum)]
enum NodeSelectArg {
    BestBound,
    Dfs,
    Fifo,
}

#[derive(Clone, Copy, ValueEnum)]
enum CutArg {
    Cglp,
    CgObjective,
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchArg {
    MostFractional,
    FirstFractional,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(value_enum)]
    method: Method,
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    proof: PathBuf,
    /// `variable` or `split:W`.
    #[arg(long, default_value = "variable")]
    family: String,
    #[arg(long, value_enum, default_value = "best-bound")]
    node_select: NodeSelectArg,
    #[arg(long, value_enum, default_value = "most-fractional")]
    branch: BranchArg,
    /// Fixed branching order of variable disjunctions, as 1-based "i:K" pairs.
    #[arg(long)]
    branch_order: Option<String>,
    #[arg(long, value_enum, default_value = "cglp")]
    cut: CutArg,
    #[arg(long, default_value_t = 10_000)]
    max_iters: usize,
    /// Stop once `<c, x> <= G` is certified.
    #[arg(long)]
    prove_bound: Option<String>,
    /// Stop once `<c, x> <= claimed + E` is certified.
    #[arg(long)]
    epsilon: Option<String>,
    /// Branch-and-cut rule: `always-cut`, `always-branch` or `rounds:R`.
    #[arg(long, default_value = "rounds:1")]
    bc_rule: String,
}

/// A run either succeeds or produced a negative verdict.
enum Outcome {
    Ok,
    Negative,
}

fn q(s: &str) -> Result<Rational> {
    parse_exact(s).map_err(|e| anyhow!("bad rational {s:?}: {e}"))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_instance(path: &Path) -> Result<Instance> {
    instance_from_json(&read(path)?).with_context(|| format!("parsing instance {}", path.display()))
}

fn load_proof(path: &Path, dim: usize) -> Result<Proof> {
    proof_from_json(&read(path)?, dim).with_context(|| format!("parsing proof {}", path.display()))
}

pub(crate) fn parse_family(s: &str, pattern: &IntegralityPattern) -> Result<DisjunctionFamily> {
    match s.split_once(':') {
        None if s == "variable" => Ok(DisjunctionFamily::variable(pattern.clone())),
        Some(("split", w)) => Ok(DisjunctionFamily::split(w.parse().context("split width")?, pattern.clone())),
        _ => bail!("unknown family {s:?}; expected `variable` or `split:W`"),
    }
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<T>().with_context(|| format!("bad list entry {t:?}")))
        .collect()
}

fn parse_ineq(s: &str, dim: usize) -> Result<Inequality> {
    let (a, b) = s.split_once(';').ok_or_else(|| anyhow!("inequality must look like \"a1,a2,...;b\""))?;
    let normal = a.split(',').map(|t| q(t.trim())).collect::<Result<Vec<_>>>()?;
    if normal.len() != dim {
        bail!("inequality has {} coefficients, instance has dimension {dim}", normal.len());
    }
    Ok(Inequality::new(normal, q(b.trim())?))
}

fn gen(kind: GenKind) -> Result<Outcome> {
    let (inst, out) = match kind {
        GenKind::K3copies { m, out } => (gen_k3_copies(m)?, out),
        GenKind::Center { m, center_edges, out } => (gen_center_variant(m, &parse_list(&center_edges)?)?, out),
        GenKind::Kmalpha {
            m,
            alpha,
            cross_edges,
            out,
        } => {
            let edges = cross_edges
                .split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| {
                    let (u, v) = t.split_once('-').ok_or_else(|| anyhow!("cross edge {t:?} is not u-v"))?;
                    Ok((u.trim().parse()?, v.trim().parse()?))
                })
                .collect::<Result<Vec<(usize, usize)>>>()?;
            let g = gen_km_copies_alpha(m, &q(&alpha)?, &edges)?;
            if let Some(w) = &g.warning {
                eprintln!("warning: {w}");
            }
            (g.instance, out)
        }
        GenKind::Bcube { n, out } => (gen_b_cross_cube(n)?, out),
        GenKind::Tetra { h, out } => (gen_tetra_h(&q(&h)?)?, out),
        GenKind::Revsplit { h, out } => (gen_reverse_split(&q(&h)?)?, out),
        GenKind::Rand01 { seed, n, density, out } => (random_01_polytope(seed, n, density)?, out),
    };
    write(&out, &instance_to_json(&inst))?;
    println!("wrote {} (dim {}, {} inequalities)", out.display(), inst.dim(), inst.polytope.ineqs.len());
    Ok(Outcome::Ok)
}

fn solve(args: SolveArgs) -> Result<Outcome> {
    let inst = load_instance(&args.instance)?;
    let n = inst.dim();
    let mut cfg = RunConfig::for_instance(&inst).with_max_iters(args.max_iters);
    cfg.family = parse_family(&args.family, &inst.pattern)?;
    cfg.node_select = match args.node_select {
        NodeSelectArg::BestBound => NodeSelect::BestBound,
        NodeSelectArg::Dfs => NodeSelect::Dfs,
        NodeSelectArg::Fifo => NodeSelect::Fifo,
    };
    cfg.cut_rule = match args.cut {
        CutArg::Cglp => CutRule::CglpMaxViolation,
        CutArg::CgObjective => CutRule::CgObjective,
    };
    cfg.branch_rule = match (&args.branch_order, args.branch) {
        (Some(order), _) => {
            let mut list = Vec::new();
            for item in order.split(',').filter(|t| !t.trim().is_empty()) {
                let (i, k) = item.split_once(':').ok_or_else(|| anyhow!("branch order entry {item:?} is not i:K"))?;
                let i: usize = i.trim().parse()?;
                if i == 0 || i > n {
                    bail!("branch order index {i} is outside 1..={n}");
                }
                list.push(var(i - 1, k.trim().parse()?, n));
            }
            BranchRule::FixedOrder(list)
        }
        (None, BranchArg::MostFractional) => BranchRule::MostFractional,
        (None, BranchArg::FirstFractional) => BranchRule::FirstFractional,
    };
    cfg.stop = match (&args.prove_bound, &args.epsilon) {
        (Some(_), Some(_)) => bail!("--prove-bound and --epsilon are mutually exclusive"),
        (Some(g), None) => StopRule::ProveBound(q(g)?),
        (None, Some(e)) => StopRule::Epsilon(q(e)?),
        (None, None) => StopRule::Optimality,
    };
    let result = match args.method {
        Method::Cp => run_cp(&inst, &cfg)?,
        Method::Bb => run_bb(&inst, &cfg)?,
        Method::Bc => {
            let rule = match args.bc_rule.as_str() {
                "always-cut" => BcRule::AlwaysCut,
                "always-branch" => BcRule::AlwaysBranch,
                other => match other.strip_prefix("rounds:") {
                    Some(r) => BcRule::Rounds(r.parse().context("bc rounds")?),
                    None => bail!("unknown bc rule {other:?}"),
                },
            };
            run_bc(&inst, &cfg, rule)?
        }
    };
    write(&args.proof, &proof_to_json(&result.proof))?;
    println!("status: {}", result.status);
    println!("iterations: {}", result.iterations);
    println!(
        "bound: {}",
        result.bound.as_ref().map_or("infeasible".to_string(), format_exact)
    );
    println!("proof_size: {}", result.proof_size());
    if let Some(x) = &result.best_point {
        let parts: Vec<String> = x.iter().map(format_exact).collect();
        println!("point: {}", parts.join(" "));
    }
    Ok(Outcome::Ok)
}

fn transform(kind: TransformKind, instance: &Path, input: &Path, out: &Path) -> Result<Outcome> {
    let inst = load_instance(instance)?;
    let proof = load_proof(input, inst.dim())?;
    let converted = match (kind, proof) {
        (TransformKind::Bc2cp, Proof::Tree(t)) => {
            let p = bc_to_cp(&inst, &t)?;
            println!("cp proof of length {} from a tree of size {}", p.len(), t.root.node_count() - 1);
            Proof::Cp(p)
        }
        (TransformKind::Cp2bb, Proof::Cp(p)) => {
            let sim = cp_to_bb(&inst, &p)?;
            println!(
                "tree of size {} from a cp proof of length {} (M = {}, bound (MK)^(n+1) = {})",
                sim.size(),
                sim.k,
                sim.m,
                sim.size_bound(inst.dim())
            );
            Proof::Tree(sim.tree)
        }
        (TransformKind::Bc2cp, Proof::Cp(_)) => bail!("bc2cp expects a tree proof"),
        (TransformKind::Cp2bb, Proof::Tree(_)) => bail!("cp2bb expects a cutting-plane proof"),
    };
    write(out, &proof_to_json(&converted))?;
    Ok(Outcome::Ok)
}

fn closure_cmd(instance: &Path, family: &str, rounds: usize, out: &Path, csv_out: Option<&Path>) -> Result<Outcome> {
    let inst = load_instance(instance)?;
    let fam = parse_family(family, &inst.pattern)?;
    let chain = iterated_closure(&inst.polytope, &fam, rounds)?;
    if let Some(path) = csv_out {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["round", "bound", "vertices"])?;
        for (r, p) in chain.iter().enumerate() {
            let bound = p.max_of(&inst.objective)?.map_or("infeasible".into(), |b| format_exact(&b));
            let verts: Vec<String> = enumerate_vertices(p)?
                .iter()
                .map(|v| format!("({})", v.iter().map(format_exact).collect::<Vec<_>>().join(" ")))
                .collect();
            w.write_record([r.to_string(), bound, verts.join(" ")])?;
        }
        w.flush()?;
    }
    let last = chain.last().expect("chain starts with the input");
    for (r, p) in chain.iter().enumerate() {
        let bound = p.max_of(&inst.objective)?.map_or("infeasible".into(), |b| format_exact(&b));
        println!("round {r}: bound {bound}, {} inequalities", p.ineqs.len());
    }
    write(out, &instance_to_json(&inst.with_polytope(last.clone())))?;
    Ok(Outcome::Ok)
}

fn rank_cmd(instance: &Path, ineq: &str, family: &str, cap: usize) -> Result<Outcome> {
    let inst = load_instance(instance)?;
    let fam = parse_family(family, &inst.pattern)?;
    let target = parse_ineq(ineq, inst.dim())?;
    println!("{}", rank(&inst.polytope, &fam, &target, cap)?);
    Ok(Outcome::Ok)
}

fn minbb(instance: &Path, gamma: &str) -> Result<Outcome> {
    let inst = load_instance(instance)?;
    match min_bb_tree_size(&inst, &q(gamma)?)? {
        Some(size) => {
            println!("{size}");
            Ok(Outcome::Ok)
        }
        None => {
            println!("none: the bound has no branch-and-bound proof");
            Ok(Outcome::Negative)
        }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Gen { kind } => gen(kind),
        Command::Solve(args) => solve(args),
        Command::Verify { instance, proof } => {
            let inst = load_instance(&instance)?;
            let proof = load_proof(&proof, inst.dim())?;
            let verdict = verify(&inst, &proof)?;
            println!("{verdict}");
            Ok(if verdict.is_accept() { Outcome::Ok } else { Outcome::Negative })
        }
        Command::Transform {
            kind,
            instance,
            input,
            out,
        } => transform(kind, &instance, &input, &out),
        Command::Closure {
            instance,
            family,
            rounds,
            out,
            csv,
        } => closure_cmd(&instance, &family, rounds, &out, csv.as_deref()),
        Command::Rank {
            instance,
            ineq,
            family,
            cap,
        } => rank_cmd(&instance, &ineq, &family, cap),
        Command::Minbb { instance, gamma } => minbb(&instance, &gamma),
        Command::Experiment {
            which: ExperimentKind::Table1,
            out,
        } => {
            let rows = experiment::table1()?;
            experiment::write_csv(&out, &rows)?;
            println!("wrote {} rows to {}", rows.len(), out.display());
            Ok(Outcome::Ok)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
