use dlab::disjunctions::var;
use dlab::engine::{
    min_bb_tree_size, run_bb, run_bc, run_cp, BcRule, BranchRule, CutRule, Instance, NodeSelect, RunConfig, Status,
    StopRule,
};
use dlab::instances::{gen_b_cross_cube, gen_k3_copies, gen_tetra_h, random_01_polytope};
use dlab::kernel::HPolytope;
use dlab::proofs::{verify, Proof};
use dlab::{Rational, Scalar};

fn q(n: i64) -> Rational {
    Rational::int(n)
}

fn frac(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn matrix(inst: &Instance) -> Vec<RunConfig> {
    let mut out = Vec::new();
    for sel in [NodeSelect::BestBound, NodeSelect::Dfs, NodeSelect::Fifo] {
        for br in [BranchRule::MostFractional, BranchRule::FirstFractional] {
            out.push(RunConfig::for_instance(inst).with_node_select(sel).with_branch_rule(br));
        }
    }
    out
}

#[test]
fn cp_with_cg_objective_solves_triangle_copies_in_m_iterations() {
    for m in 1..=3 {
        let inst = gen_k3_copies(m).unwrap();
        let cfg = RunConfig::for_instance(&inst).with_cut_rule(CutRule::CgObjective);
        let r = run_cp(&inst, &cfg).unwrap();
        assert_eq!(r.status, Status::Optimal, "m = {m}");
        assert_eq!(r.iterations, m);
        assert_eq!(r.bound, Some(q(m as i64)));
        assert!(verify(&inst, &r.proof).unwrap().is_accept());
    }
}

#[test]
fn cp_on_integral_vertex_takes_no_iterations() {
    let p = HPolytope::unit_cube(2);
    let inst = Instance::new(p, vec![q(1), q(1)], dlab::disjunctions::IntegralityPattern::all_integral(2), None).unwrap();
    let r = run_cp(&inst, &RunConfig::for_instance(&inst)).unwrap();
    assert_eq!(r.status, Status::Optimal);
    assert_eq!(r.iterations, 0);
    assert_eq!(r.best_point, Some(vec![q(1), q(1)]));
}

#[test]
fn cp_on_b_cross_cube_hits_the_cap_with_positive_bound() {
    let inst = gen_b_cross_cube(2).unwrap();
    let cfg = RunConfig::for_instance(&inst).with_max_iters(12);
    let r = run_cp(&inst, &cfg).unwrap();
    assert_eq!(r.status, Status::IterationCap);
    assert_eq!(r.iterations, 12);
    let bound = r.bound.unwrap();
    assert!(bound >= frac(1, 2 + 64), "bound {bound}");
    assert!(verify(&inst, &r.proof).unwrap().is_accept());
    // the dual bound never increases
    let bounds: Vec<_> = r.trace.iter().filter_map(|t| t.bound.clone()).collect();
    assert!(bounds.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn bb_on_triangle_copies_needs_exponential_trees() {
    for m in 1..=2 {
        let inst = gen_k3_copies(m).unwrap();
        let lower = (1usize << (m + 1)) - 2;
        for cfg in matrix(&inst) {
            let r = run_bb(&inst, &cfg).unwrap();
            assert_eq!(r.status, Status::Optimal);
            assert!(r.proof_size() >= lower, "{cfg:?}: {}", r.proof_size());
            assert!(verify(&inst, &r.proof).unwrap().is_accept());
        }
    }
}

#[test]
fn bb_fixed_order_on_b_cross_cube() {
    let inst = gen_b_cross_cube(2).unwrap();
    let n = inst.dim();
    let cfg = RunConfig::for_instance(&inst)
        .with_branch_rule(BranchRule::FixedOrder(vec![var(0, 1, n), var(1, 0, n)]))
        .with_stop(StopRule::ProveBound(q(0)));
    let r = run_bb(&inst, &cfg).unwrap();
    assert!(matches!(r.status, Status::BoundProved | Status::Optimal), "{:?}", r.status);
    assert_eq!(r.bound, Some(q(0)));
    assert!(r.proof_size() < 5, "nodes = {}", r.proof_size() + 1);
    assert!(verify(&inst, &r.proof).unwrap().is_accept());
}

#[test]
fn bb_fixed_order_on_tetra() {
    for h in [4, 16, 100] {
        let inst = gen_tetra_h(&q(h)).unwrap();
        let n = inst.dim();
        let cfg = RunConfig::for_instance(&inst)
            .with_branch_rule(BranchRule::FixedOrder(vec![var(0, 0, n), var(1, 0, n)]))
            .with_stop(StopRule::ProveBound(q(0)));
        let r = run_bb(&inst, &cfg).unwrap();
        assert_eq!(r.bound, Some(q(0)), "h = {h}");
        assert!(r.proof_size() < 7, "h = {h}: nodes = {}", r.proof_size() + 1);
        assert!(verify(&inst, &r.proof).unwrap().is_accept());
    }
}

#[test]
fn degenerate_bc_rules_reproduce_cp_and_bb() {
    let inst = gen_k3_copies(2).unwrap();
    let cfg = RunConfig::for_instance(&inst);
    let cp = run_cp(&inst, &cfg).unwrap();
    let bc = run_bc(&inst, &cfg, BcRule::AlwaysCut).unwrap();
    let Proof::Tree(tree) = &bc.proof else { panic!() };
    let Proof::Cp(cp_proof) = &cp.proof else { panic!() };
    assert_eq!(&tree.chain_to_cp().unwrap(), cp_proof);
    assert_eq!(bc.bound, cp.bound);

    let bb = run_bb(&inst, &cfg).unwrap();
    let bc = run_bc(&inst, &cfg, BcRule::AlwaysBranch).unwrap();
    assert_eq!(bb, bc);
}

#[test]
fn mixed_tree_verifies() {
    let inst = gen_k3_copies(2).unwrap();
    let r = run_bc(&inst, &RunConfig::for_instance(&inst), BcRule::Rounds(1)).unwrap();
    assert_eq!(r.status, Status::Optimal);
    assert!(verify(&inst, &r.proof).unwrap().is_accept());
}

#[test]
fn min_bb_sizes() {
    assert_eq!(min_bb_tree_size(&gen_k3_copies(1).unwrap(), &q(1)).unwrap(), Some(2));
    assert_eq!(min_bb_tree_size(&gen_k3_copies(2).unwrap(), &q(2)).unwrap(), Some(6));
    let p = HPolytope::unit_cube(2);
    let inst = Instance::new(p, vec![q(1), q(1)], dlab::disjunctions::IntegralityPattern::all_integral(2), None).unwrap();
    assert_eq!(min_bb_tree_size(&inst, &q(2)).unwrap(), Some(0));
    // an invalid bound has no proof at all
    assert_eq!(min_bb_tree_size(&gen_k3_copies(1).unwrap(), &q(0)).unwrap(), None);
}

#[test]
fn runs_are_deterministic() {
    let inst = random_01_polytope(7, 4, 0.5).unwrap();
    for cfg in matrix(&inst) {
        assert_eq!(run_bb(&inst, &cfg).unwrap(), run_bb(&inst, &cfg).unwrap());
        assert_eq!(run_cp(&inst, &cfg).unwrap(), run_cp(&inst, &cfg).unwrap());
    }
}

#[test]
fn bb_leaves_cover_the_lattice_points() {
    for seed in 0..5 {
        let inst = random_01_polytope(seed, 4, 0.5).unwrap();
        let r = run_bb(&inst, &RunConfig::for_instance(&inst)).unwrap();
        let Proof::Tree(tree) = &r.proof else { panic!() };
        let bound = r.bound.clone();
        let mut leaves: Vec<dlab::Polytope> = Vec::new();
        collect_leaves(&tree.root, inst.polytope.clone(), &mut leaves);
        for x in inst.lattice_points().unwrap() {
            assert!(leaves.iter().any(|l| l.contains(&x)), "seed {seed}: {x:?} uncovered");
            let v = dlab::kernel::dot(&inst.objective, &x);
            assert!(bound.as_ref().is_some_and(|b| v <= *b));
        }
    }
}

fn collect_leaves(n: &dlab::proofs::BcNode, region: dlab::Polytope, out: &mut Vec<dlab::Polytope>) {
    use dlab::proofs::NodeKind;
    match &n.kind {
        NodeKind::Leaf => out.push(region),
        NodeKind::Cut { cut, .. } => collect_leaves(&n.children[0], region.with(cut.clone()), out),
        NodeKind::Branch { disjunction } => {
            for (c, piece) in n.children.iter().zip(&disjunction.pieces) {
                collect_leaves(c, region.with_all(&piece.ineqs), out);
            }
        }
    }
}

#[test]
fn epsilon_stop_certifies_claim_plus_eps() {
    let inst = gen_k3_copies(2).unwrap();
    let cfg = RunConfig::for_instance(&inst).with_stop(StopRule::Epsilon(frac(1, 2)));
    let r = run_cp(&inst, &cfg).unwrap();
    assert!(r.bound.unwrap() <= frac(5, 2));
}
