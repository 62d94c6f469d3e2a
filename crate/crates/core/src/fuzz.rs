//! Single-field perturbations of proofs, for checking that the verifiers
//! reject every corrupted certificate.
//!
//! The perturbations assume every cut of the proof is essential: loosening a
//! cut's right-hand side then breaks the target, tightening it breaks the cut.

use crate::disjunctions::Disjunction;
use crate::proofs::{BcNode, BcProofTree, CpProof, NodeKind};
use crate::{Inequality, Rational};

const DENOMINATORS: [i64; 3] = [2, 3, 100];

fn swapped(d: &Disjunction) -> Disjunction {
    let mut d = d.clone();
    d.pieces.reverse();
    d
}

fn shifted(h: &Inequality, delta: &Rational) -> Inequality {
    Inequality::new(h.normal.clone(), &h.rhs + delta)
}

fn fraction(q: i64) -> Rational {
    Rational::new(1.into(), q.into())
}

/// Cut right-hand sides moved by `±1/q`, the target tightened by `1/q`, each
/// step dropped, and each step's pieces swapped.
pub fn cp_perturbations(p: &CpProof) -> Vec<(String, CpProof)> {
    let mut out = Vec::new();
    for q in DENOMINATORS {
        let d = fraction(q);
        for i in 0..p.len() {
            for (sign, delta) in [("+", d.clone()), ("-", -d.clone())] {
                let mut v = p.clone();
                v.steps[i].cut = shifted(&v.steps[i].cut, &delta);
                out.push((format!("step {} rhs {sign}1/{q}", i + 1), v));
            }
        }
        let mut v = p.clone();
        v.target = shifted(&v.target, &-d);
        out.push((format!("target rhs -1/{q}"), v));
    }
    for i in 0..p.len() {
        let mut v = p.clone();
        v.steps.remove(i);
        out.push((format!("drop step {}", i + 1), v));
        let mut v = p.clone();
        v.steps[i].disjunction = swapped(&v.steps[i].disjunction);
        out.push((format!("swap pieces of step {}", i + 1), v));
    }
    out
}

fn branch_paths(n: &BcNode, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if matches!(n.kind, NodeKind::Branch { .. }) {
        out.push(path.clone());
    }
    for (i, c) in n.children.iter().enumerate() {
        path.push(i);
        branch_paths(c, path, out);
        path.pop();
    }
}

fn node_at<'a>(root: &'a mut BcNode, path: &[usize]) -> &'a mut BcNode {
    path.iter().fold(root, |n, &i| &mut n.children[i])
}

/// The target tightened by `1/q`, and at every branching node: one child
/// dropped, the pieces swapped, or the subtree pruned to a leaf.
pub fn tree_perturbations(t: &BcProofTree) -> Vec<(String, BcProofTree)> {
    let mut out = Vec::new();
    for q in DENOMINATORS {
        let mut v = t.clone();
        v.target = shifted(&v.target, &-fraction(q));
        out.push((format!("target rhs -1/{q}"), v));
    }
    let mut paths = Vec::new();
    branch_paths(&t.root, &mut vec![], &mut paths);
    for path in paths {
        let mut v = t.clone();
        node_at(&mut v.root, &path).children.pop();
        out.push((format!("drop a child at {path:?}"), v));

        let mut v = t.clone();
        if let NodeKind::Branch { disjunction } = &mut node_at(&mut v.root, &path).kind {
            *disjunction = swapped(disjunction);
        }
        out.push((format!("swap pieces at {path:?}"), v));

        let mut v = t.clone();
        *node_at(&mut v.root, &path) = BcNode::leaf();
        out.push((format!("prune subtree at {path:?}"), v));
    }
    out
}
