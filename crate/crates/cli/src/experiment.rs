//! The separation table: cutting planes against branch-and-bound on the
//! desk-scale instance families.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use anyhow::Result;
use rayon::prelude::*;

use dlab::closures::{iterated_closure, rank, Rank};
use dlab::disjunctions::{var, DisjunctionFamily};
use dlab::engine::{
    min_bb_tree_size, run_bb, run_cp, BranchRule, CutRule, Instance, NodeSelect, RunConfig, RunResult, StopRule,
};
use dlab::instances::{gen_b_cross_cube, gen_k3_copies, gen_tetra_h};
use dlab::proofs::Proof;
use dlab::scalar::format_exact;
use dlab::transforms::cp_to_bb;
use dlab::{Inequality, Rational, Scalar};

pub const SCHEMA: &str = "# dlab table1 schema v1";
pub const HEADER: [&str; 9] = [
    "instance",
    "params",
    "family",
    "method",
    "measure",
    "value",
    "bound_achieved",
    "status",
    "wall_ms",
];

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Row {
    pub instance: String,
    pub params: String,
    pub family: String,
    pub method: String,
    pub measure: String,
    pub value: String,
    pub bound_achieved: String,
    pub status: String,
    pub wall_ms: u128,
}

fn bound_str(b: &Option<Rational>) -> String {
    b.as_ref().map_or("infeasible".into(), format_exact)
}

fn engine_row(instance: &str, params: String, method: &str, measure: &str, r: &RunResult, ms: u128) -> Row {
    let value = match measure {
        "iterations" => r.iterations,
        _ => r.proof_size(),
    };
    Row {
        instance: instance.into(),
        params,
        family: "variable".into(),
        method: method.into(),
        measure: measure.into(),
        value: value.to_string(),
        bound_achieved: bound_str(&r.bound),
        status: r.status.to_string(),
        wall_ms: ms,
    }
}

type Cell = Box<dyn Fn() -> Result<Vec<Row>> + Send + Sync>;

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, u128)> {
    let t = Instant::now();
    let v = f()?;
    Ok((v, t.elapsed().as_millis()))
}

fn k3_cells() -> Vec<Cell> {
    let mut cells: Vec<Cell> = Vec::new();
    for m in 1..=4usize {
        cells.push(Box::new(move || {
            let inst = gen_k3_copies(m)?;
            let cfg = RunConfig::for_instance(&inst).with_cut_rule(CutRule::CgObjective);
            let (r, ms) = timed(|| Ok(run_cp(&inst, &cfg)?))?;
            let mut rows = vec![engine_row("k3copies", format!("m={m}"), "cp-cg", "iterations", &r, ms)];
            // the simulation of that proof by branching
            if let Proof::Cp(p) = &r.proof {
                let (sim, ms) = timed(|| Ok(cp_to_bb(&inst, p)?))?;
                rows.push(Row {
                    instance: "k3copies".into(),
                    params: format!("m={m};M={};K={};bound={}", sim.m, sim.k, sim.size_bound(inst.dim())),
                    family: "variable".into(),
                    method: "cp2bb".into(),
                    measure: "tree_size".into(),
                    value: sim.size().to_string(),
                    bound_achieved: format_exact(&p.target.rhs),
                    status: "VERIFIED".into(),
                    wall_ms: ms,
                });
            }
            Ok(rows)
        }));
        cells.push(Box::new(move || {
            let inst = gen_k3_copies(m)?;
            let cfg = RunConfig::for_instance(&inst);
            let (r, ms) = timed(|| Ok(run_bb(&inst, &cfg)?))?;
            Ok(vec![engine_row("k3copies", format!("m={m}"), "bb", "tree_size", &r, ms)])
        }));
        if m <= 2 {
            cells.push(Box::new(move || {
                let inst = gen_k3_copies(m)?;
                let gamma = Rational::int(m as i64);
                let (size, ms) = timed(|| Ok(min_bb_tree_size(&inst, &gamma)?))?;
                Ok(vec![Row {
                    instance: "k3copies".into(),
                    params: format!("m={m}"),
                    family: "variable".into(),
                    method: "minbb".into(),
                    measure: "tree_size".into(),
                    value: size.map_or("none".into(), |s| s.to_string()),
                    bound_achieved: format_exact(&gamma),
                    status: if size.is_some() { "OPTIMAL" } else { "NO_PROOF" }.into(),
                    wall_ms: ms,
                }])
            }));
        }
    }
    cells
}

fn fixed_order(inst: &Instance, order: &[(usize, i64)]) -> RunConfig {
    let n = inst.dim();
    RunConfig::for_instance(inst)
        .with_branch_rule(BranchRule::FixedOrder(order.iter().map(|&(i, k)| var(i, k, n)).collect()))
        .with_node_select(NodeSelect::BestBound)
        .with_stop(StopRule::ProveBound(Rational::int(0)))
}

fn bcube_cells() -> Vec<Cell> {
    vec![
        Box::new(|| {
            let inst = gen_b_cross_cube(2)?;
            let cfg = fixed_order(&inst, &[(0, 1), (1, 0)]);
            let (r, ms) = timed(|| Ok(run_bb(&inst, &cfg)?))?;
            Ok(vec![engine_row("bcube", "n=2;order=D1,1:D2,0".into(), "bb-fixed", "tree_size", &r, ms)])
        }),
        Box::new(|| {
            let inst = gen_b_cross_cube(2)?;
            let cfg = RunConfig::for_instance(&inst).with_max_iters(12);
            let (r, ms) = timed(|| Ok(run_cp(&inst, &cfg)?))?;
            Ok(vec![engine_row("bcube", "n=2;max_iters=12".into(), "cp-cglp", "iterations", &r, ms)])
        }),
        Box::new(|| {
            let inst = gen_b_cross_cube(2)?;
            let fam = DisjunctionFamily::variable(inst.pattern.clone());
            let (chain, ms) = timed(|| Ok(iterated_closure(&inst.polytope, &fam, 8)?))?;
            let last = chain.last().expect("nonempty").max_of(&inst.objective)?;
            Ok(vec![Row {
                instance: "bcube".into(),
                params: "n=2;rounds=8".into(),
                family: "variable".into(),
                method: "closure".into(),
                measure: "closure_rounds".into(),
                value: (chain.len() - 1).to_string(),
                bound_achieved: bound_str(&last),
                status: if last.as_ref().is_some_and(|b| *b > Rational::int(0)) {
                    "POSITIVE_GAP"
                } else {
                    "CLOSED"
                }
                .into(),
                wall_ms: ms,
            }])
        }),
    ]
}

fn tetra_cells() -> Vec<Cell> {
    let mut cells: Vec<Cell> = Vec::new();
    for h in [4i64, 16, 64] {
        cells.push(Box::new(move || {
            let inst = gen_tetra_h(&Rational::int(h))?;
            let cfg = fixed_order(&inst, &[(0, 0), (1, 0)]);
            let (r, ms) = timed(|| Ok(run_bb(&inst, &cfg)?))?;
            Ok(vec![engine_row("tetra", format!("h={h};order=D1,0:D2,0"), "bb-fixed", "tree_size", &r, ms)])
        }));
        cells.push(Box::new(move || {
            // certify x_3 <= (h+1)/2 by cutting planes
            let inst = gen_tetra_h(&Rational::int(h))?;
            let gamma = Rational::new((h + 1).into(), 2.into());
            let cfg = RunConfig::for_instance(&inst)
                .with_stop(StopRule::ProveBound(gamma))
                .with_max_iters(2000);
            let (r, ms) = timed(|| Ok(run_cp(&inst, &cfg)?))?;
            Ok(vec![engine_row("tetra", format!("h={h};target=x3<=(h+1)/2"), "cp-cglp", "iterations", &r, ms)])
        }));
        cells.push(Box::new(move || {
            let inst = gen_tetra_h(&Rational::int(h))?;
            let gamma = Rational::new((h + 1).into(), 2.into());
            let fam = DisjunctionFamily::variable(inst.pattern.clone());
            let target = Inequality::new(vec![Rational::int(0), Rational::int(0), Rational::int(1)], gamma.clone());
            let (rk, ms) = timed(|| Ok(rank(&inst.polytope, &fam, &target, 200)?))?;
            let (value, status) = match rk {
                Rank::Finite(n) => (n.to_string(), "BOUND_PROVED"),
                Rank::Exceeds(cap) => (format!(">{cap}"), "ITERATION_CAP"),
            };
            Ok(vec![Row {
                instance: "tetra".into(),
                params: format!("h={h};target=x3<=(h+1)/2"),
                family: "variable".into(),
                method: "closure-rank".into(),
                measure: "closure_rounds".into(),
                value,
                bound_achieved: format_exact(&gamma),
                status: status.into(),
                wall_ms: ms,
            }])
        }));
    }
    cells
}

/// All rows, computed concurrently and sorted canonically.
pub fn table1() -> Result<Vec<Row>> {
    let mut cells = k3_cells();
    cells.extend(bcube_cells());
    cells.extend(tetra_cells());
    let parts: Vec<Vec<Row>> = cells.par_iter().map(|c| c()).collect::<Result<_>>()?;
    let mut rows: Vec<Row> = parts.into_iter().flatten().collect();
    rows.sort();
    Ok(rows)
}

pub fn write_csv(path: &Path, rows: &[Row]) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    writeln!(file, "{SCHEMA}")?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record([
            r.instance.as_str(),
            &r.params,
            &r.family,
            &r.method,
            &r.measure,
            &r.value,
            &r.bound_achieved,
            &r.status,
            &r.wall_ms.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
