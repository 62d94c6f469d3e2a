//! Verifier behaviour, including a perturbation suite: every single-field
//! change of an accepted proof must be rejected.

use dlab::disjunctions::var;
use dlab::fuzz::{cp_perturbations, tree_perturbations};
use dlab::engine::{run_bb, run_cp, CutRule, Instance, RunConfig};
use dlab::instances::gen_k3_copies;
use dlab::proofs::{
    proof_size, verify, verify_bc_proof, verify_cp_proof, BcNode, BcProofTree, CpProof, Location, Proof,
    Verdict,
};
use dlab::{Inequality, Rational};

fn frac(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn cp_proof(inst: &Instance) -> CpProof {
    let cfg = RunConfig::for_instance(inst).with_cut_rule(CutRule::CgObjective);
    match run_cp(inst, &cfg).unwrap().proof {
        Proof::Cp(p) => p,
        Proof::Tree(_) => unreachable!(),
    }
}

fn bb_tree(inst: &Instance) -> BcProofTree {
    match run_bb(inst, &RunConfig::for_instance(inst)).unwrap().proof {
        Proof::Tree(t) => t,
        Proof::Cp(_) => unreachable!(),
    }
}

fn bump(h: &Inequality, delta: &Rational) -> Inequality {
    Inequality::new(h.normal.clone(), &h.rhs + delta)
}

#[test]
fn engine_proof_is_accepted() {
    let inst = gen_k3_copies(2).unwrap();
    assert_eq!(verify_cp_proof(&inst, &cp_proof(&inst)).unwrap(), Verdict::Accept);
    let inst = gen_k3_copies(1).unwrap();
    assert_eq!(verify_bc_proof(&inst, &bb_tree(&inst)).unwrap(), Verdict::Accept);
}

#[test]
fn tightened_cut_is_rejected_at_its_step() {
    let inst = gen_k3_copies(2).unwrap();
    let mut p = cp_proof(&inst);
    p.steps[1].cut = bump(&p.steps[1].cut, &frac(-1, 100));
    match verify_cp_proof(&inst, &p).unwrap() {
        Verdict::Reject { at, .. } => assert_eq!(at, Location::Step(1)),
        Verdict::Accept => panic!("accepted an invalid cut"),
    }
}

#[test]
fn empty_proof_of_a_valid_target() {
    let inst = gen_k3_copies(1).unwrap();
    let p = CpProof::new(vec![], Inequality::from_ints(&[1, 1, 1], 3));
    assert!(verify_cp_proof(&inst, &p).unwrap().is_accept());
    let p = CpProof::new(vec![], Inequality::from_ints(&[1, 1, 1], 1));
    assert!(!verify_cp_proof(&inst, &p).unwrap().is_accept());
}

#[test]
fn target_must_bound_the_objective() {
    let inst = gen_k3_copies(1).unwrap();
    // valid for C but not a statement about the objective
    let p = CpProof::new(vec![], Inequality::from_ints(&[1, 0, 0], 1));
    assert!(matches!(
        verify_cp_proof(&inst, &p).unwrap(),
        Verdict::Reject { at: Location::Target, .. }
    ));
}

#[test]
fn branching_node_missing_a_child_is_rejected() {
    let inst = gen_k3_copies(1).unwrap();
    let mut t = bb_tree(&inst);
    t.root.children.pop();
    assert!(matches!(
        verify_bc_proof(&inst, &t).unwrap(),
        Verdict::Reject { at: Location::Node(ref p), .. } if p.is_empty()
    ));
}

#[test]
fn proof_sizes() {
    let inst = gen_k3_copies(3).unwrap();
    assert_eq!(proof_size(&Proof::Cp(cp_proof(&inst))), 3);

    // full binary tree of depth m
    let n = 3;
    fn full(depth: usize, n: usize) -> BcNode {
        if depth == 0 {
            return BcNode::leaf();
        }
        BcNode::branch(var(depth - 1, 0, n), vec![full(depth - 1, n), full(depth - 1, n)])
    }
    for m in 1..=3 {
        let t = BcProofTree {
            root: full(m, n),
            target: Inequality::infeasible(n),
        };
        assert_eq!(proof_size(&Proof::Tree(t)), (1 << (m + 1)) - 2);
    }

    let cut = Inequality::from_ints(&[1, 1, 1], 1);
    let mut chain = BcNode::leaf();
    for _ in 0..4 {
        chain = BcNode::cut(var(0, 0, n), cut.clone(), chain);
    }
    let t = BcProofTree {
        root: chain,
        target: Inequality::infeasible(n),
    };
    assert_eq!(proof_size(&Proof::Tree(t)), 4);
}

#[test]
fn fuzz_rejects_every_single_field_perturbation() {
    let mut total = 0;
    for m in 1..=3 {
        let inst = gen_k3_copies(m).unwrap();
        let p = cp_proof(&inst);
        assert!(verify(&inst, &Proof::Cp(p.clone())).unwrap().is_accept());
        for (what, v) in cp_perturbations(&p) {
            total += 1;
            assert!(!verify_cp_proof(&inst, &v).unwrap().is_accept(), "m = {m}: accepted {what}");
        }
    }
    for m in 1..=2 {
        let inst = gen_k3_copies(m).unwrap();
        let t = bb_tree(&inst);
        for (what, v) in tree_perturbations(&t) {
            total += 1;
            assert!(!verify_bc_proof(&inst, &v).unwrap().is_accept(), "m = {m}: accepted {what}");
        }
    }
    assert!(total > 50);
}

#[test]
fn accepted_proofs_are_sound_on_lattice_points() {
    for m in 1..=2 {
        let inst = gen_k3_copies(m).unwrap();
        for proof in [Proof::Cp(cp_proof(&inst)), Proof::Tree(bb_tree(&inst))] {
            assert!(verify(&inst, &proof).unwrap().is_accept());
            let target = match &proof {
                Proof::Cp(p) => p.target.clone(),
                Proof::Tree(t) => t.target.clone(),
            };
            for x in inst.lattice_points().unwrap() {
                assert!(target.is_satisfied_by(&x));
            }
        }
    }
}
