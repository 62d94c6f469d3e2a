//! Proof transformations on polytopes: rotating face-valid inequalities,
//! lifting cutting-plane proofs from a face, turning branch-and-cut trees into
//! cutting-plane proofs, and simulating cutting-plane proofs by branching.
//!
//! Everything here is exact (no slack is ever added to a rotated inequality),
//! which is possible because every set involved is a rational polytope.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::disjunctions::{complexity, Disjunction, IntegralityPattern, Structure};
use crate::engine::Instance;
use crate::kernel::{enumerate_vertices, solve_lp, KernelError, LinearInequality, LpOutcome, Sense};
use crate::proofs::{
    verify_bc_proof, verify_cp_on, verify_cp_proof, BcNode, BcProofTree, CpProof, CutStep, NodeKind, Verdict,
};
use crate::{Inequality, Polytope, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("face inequality {0} is not valid for the polytope")]
    InvalidFace(String),
    #[error("target {target} is not valid on the face: value {value} at {point:?}")]
    TargetNotValidOnFace {
        target: String,
        value: String,
        point: Vec<String>,
    },
    #[error("input proof does not verify: {0}")]
    InputRejected(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("output proof does not verify: {0}")]
    OutputRejected(String),
}

/// The face `F = C ∩ {<a, x> = b}` of a polytope `C` on which `<a, x> <= b` is valid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceSpec {
    pub face_ineq: Inequality,
}

impl FaceSpec {
    pub fn new(face_ineq: Inequality) -> Self {
        Self { face_ineq }
    }

    /// `C ∩ {<a, x> = b}` as an inequality system.
    pub fn face_of(&self, c: &Polytope) -> Polytope {
        c.with(self.face_ineq.clone()).with(self.face_ineq.reversed())
    }

    pub fn check_valid(&self, c: &Polytope) -> Result<(), TransformError> {
        if c.implies(&self.face_ineq)? {
            Ok(())
        } else {
            Err(TransformError::InvalidFace(self.face_ineq.to_string()))
        }
    }
}

/// `<c + lambda a, x> <= gamma + lambda b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rotation {
    pub lambda: Rational,
    pub rotated: Inequality,
}

fn rotate_by(target: &Inequality, face: &Inequality, lambda: &Rational) -> Inequality {
    LinearInequality::new(
        target
            .normal
            .iter()
            .zip(&face.normal)
            .map(|(c, a)| c + lambda * a)
            .collect(),
        &target.rhs + lambda * &face.rhs,
    )
}

/// Smallest `lambda >= 0` making the rotation valid on `c`, assuming the
/// target holds on the face: the maximum of `(<t, x> - gamma) / (b - <a, x>)`
/// over vertices of `c` off the face.
fn rotation_lambda(c: &Polytope, face: &Inequality, target: &Inequality) -> Result<Rational, KernelError> {
    let mut lambda = Rational::zero();
    for v in enumerate_vertices(c)?.iter() {
        let slack = &face.rhs - face.lhs(v);
        if slack.is_zero() {
            continue;
        }
        let excess = target.violation(v);
        let ratio = excess / slack;
        if ratio > lambda {
            lambda = ratio;
        }
    }
    Ok(lambda)
}

/// Rotates `target`, valid on the face `F`, around `F` until it is valid on
/// all of `c`. Its restriction to the hyperplane `<a, x> = b` is unchanged.
pub fn rotate_valid_on_face(c: &Polytope, face: &FaceSpec, target: &Inequality) -> Result<Rotation, TransformError> {
    face.check_valid(c)?;
    let f = face.face_of(c);
    if let LpOutcome::Optimal { point, value } = solve_lp(&f, &target.normal, Sense::Max)? {
        if value > target.rhs {
            return Err(TransformError::TargetNotValidOnFace {
                target: target.to_string(),
                value: value.to_string(),
                point: point.iter().map(|v| v.to_string()).collect(),
            });
        }
    }
    let lambda = rotation_lambda(c, &face.face_ineq, target)?;
    let rotated = rotate_by(target, &face.face_ineq, &lambda);
    debug_assert!(c.implies(&rotated)?);
    Ok(Rotation { lambda, rotated })
}

/// Lifts a proof that verifies on the face `F` of `c` to a proof of the same
/// length on `c`: every cut and the target are rotated around `F`, and each
/// rotated cut is derived from the same disjunction as the original.
pub fn lift_cp_proof(
    c: &Polytope,
    face: &FaceSpec,
    pattern: &IntegralityPattern,
    proof_on_face: &CpProof,
) -> Result<CpProof, TransformError> {
    face.check_valid(c)?;
    let f = face.face_of(c);
    if let Verdict::Reject { at, reason } = verify_cp_on(&f, pattern, proof_on_face)? {
        return Err(TransformError::InputRejected(format!("{at}: {reason}")));
    }
    let a = &face.face_ineq;
    let mut region = c.clone();
    let mut steps = Vec::with_capacity(proof_on_face.len());
    for step in &proof_on_face.steps {
        let mut lambda = Rational::zero();
        for piece in &step.disjunction.pieces {
            let r = region.with_all(&piece.ineqs);
            let l = rotation_lambda(&r, a, &step.cut)?;
            if l > lambda {
                lambda = l;
            }
        }
        let cut = rotate_by(&step.cut, a, &lambda);
        region.ineqs.push(cut.clone());
        steps.push(CutStep {
            disjunction: step.disjunction.clone(),
            cut,
        });
    }
    let lambda = rotation_lambda(&region, a, &proof_on_face.target)?;
    let out = CpProof::new(steps, rotate_by(&proof_on_face.target, a, &lambda));
    if let Verdict::Reject { at, reason } = verify_cp_on(c, pattern, &out)? {
        return Err(TransformError::OutputRejected(format!("{at}: {reason}")));
    }
    Ok(out)
}

/// Errors unless every coordinate of `p` lies in `[0, 1]`.
pub fn check_in_unit_cube(p: &Polytope) -> Result<(), TransformError> {
    let n = p.dim;
    for i in 0..n {
        for (upper, bound) in [(true, Rational::one()), (false, Rational::zero())] {
            let h = LinearInequality::coordinate_bound(n, i, bound, upper);
            if !p.implies(&h)? {
                return Err(TransformError::Unsupported(format!(
                    "coordinate {} leaves [0, 1]",
                    i + 1
                )));
            }
        }
    }
    Ok(())
}

/// Converts a verified branch-and-cut tree over a 0/1 polytope, whose
/// branching nodes use `D_{i,0}`, into a cutting-plane proof of the same
/// target whose length is at most the tree's size.
///
/// Works bottom-up: a leaf needs no cuts; a cutting node prepends its cut; a
/// branching node lifts the proofs of its two children from the faces
/// `x_i = 0` and `x_i = 1`, concatenates them, and closes with the target
/// itself derived from `D_{i,0}` (skipped when already implied).
pub fn bc_to_cp(inst: &Instance, tree: &BcProofTree) -> Result<CpProof, TransformError> {
    check_in_unit_cube(&inst.polytope)?;
    if let Verdict::Reject { at, reason } = verify_bc_proof(inst, tree)? {
        return Err(TransformError::InputRejected(format!("{at}: {reason}")));
    }
    let steps = convert(&inst.polytope, &inst.pattern, &tree.root, &tree.target)?;
    let out = CpProof::new(steps, tree.target.clone());
    if let Verdict::Reject { at, reason } = verify_cp_proof(inst, &out)? {
        return Err(TransformError::OutputRejected(format!("{at}: {reason}")));
    }
    Ok(out)
}

fn convert(
    region: &Polytope,
    pattern: &IntegralityPattern,
    node: &BcNode,
    target: &Inequality,
) -> Result<Vec<CutStep>, TransformError> {
    match &node.kind {
        NodeKind::Leaf => Ok(vec![]),
        NodeKind::Cut { disjunction, cut } => {
            let mut steps = vec![CutStep {
                disjunction: disjunction.clone(),
                cut: cut.clone(),
            }];
            steps.extend(convert(&region.with(cut.clone()), pattern, &node.children[0], target)?);
            Ok(steps)
        }
        NodeKind::Branch { disjunction } => match disjunction.structure() {
            Some(Structure::Variable { i, k }) if k.is_zero() => {
                close_branch(region, pattern, disjunction, i, &node.children, target)
            }
            _ => Err(TransformError::Unsupported(format!(
                "branching on {} is not a facial variable disjunction",
                disjunction.label
            ))),
        },
    }
}

fn close_branch(
    region: &Polytope,
    pattern: &IntegralityPattern,
    disjunction: &Disjunction,
    i: usize,
    children: &[BcNode],
    target: &Inequality,
) -> Result<Vec<CutStep>, TransformError> {
    let n = region.dim;
    let faces = [
        LinearInequality::coordinate_bound(n, i, Rational::zero(), false),
        LinearInequality::coordinate_bound(n, i, Rational::one(), true),
    ];
    let mut steps = Vec::new();
    let mut running = region.clone();
    for ((child, piece), face) in children.iter().zip(&disjunction.pieces).zip(faces) {
        let sub = convert(&region.with_all(&piece.ineqs), pattern, child, target)?;
        let lifted = lift_cp_proof(region, &FaceSpec::new(face), pattern, &CpProof::new(sub, target.clone()))?;
        for s in lifted.steps {
            running.ineqs.push(s.cut.clone());
            steps.push(s);
        }
        // the rotated target is implied by its own lifted proof
        if !running.implies(&lifted.target)? {
            return Err(TransformError::OutputRejected(format!(
                "lifted target {} is not implied by its proof",
                lifted.target
            )));
        }
    }
    if !running.implies(target)? {
        steps.push(CutStep {
            disjunction: disjunction.clone(),
            cut: target.clone(),
        });
    }
    Ok(steps)
}

/// Measured quantities of a simulation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simulation {
    pub tree: BcProofTree,
    /// Largest disjunction complexity in the proof.
    pub m: usize,
    /// Proof length.
    pub k: usize,
}

impl Simulation {
    pub fn size(&self) -> usize {
        self.tree.root.node_count() - 1
    }

    /// `(M K)^(n+1)` as an exact big integer.
    pub fn size_bound(&self, n: usize) -> num_bigint::BigUint {
        num_bigint::BigUint::from(self.m * self.k).pow(n as u32 + 1)
    }
}

struct SimNode {
    kind: NodeKind,
    children: Vec<usize>,
    region: Polytope,
    /// `None` for infeasible leaves.
    lp: Option<(Rational, Vec<Rational>)>,
}

/// Simulates a verified cutting-plane proof by branching only. While the best
/// open node's LP bound exceeds the bound after `i` cuts, the oldest such
/// node is split by the earliest disjunction whose cut its LP vertex violates.
pub fn cp_to_bb(inst: &Instance, proof: &CpProof) -> Result<Simulation, TransformError> {
    if let Verdict::Reject { at, reason } = verify_cp_proof(inst, proof)? {
        return Err(TransformError::InputRejected(format!("{at}: {reason}")));
    }
    let c = &inst.objective;
    let lp = |region: &Polytope| -> Result<Option<(Rational, Vec<Rational>)>, KernelError> {
        Ok(match solve_lp(region, c, Sense::Max)? {
            LpOutcome::Infeasible => None,
            LpOutcome::Optimal { point, value } => Some((value, point)),
        })
    };
    let mut nodes = vec![SimNode {
        kind: NodeKind::Leaf,
        children: vec![],
        region: inst.polytope.clone(),
        lp: lp(&inst.polytope)?,
    }];
    let mut open: Vec<usize> = vec![0];

    let k = proof.len();
    for i in 0..=k {
        let z_cp = lp(&proof.relaxation(&inst.polytope, i))?.map(|(v, _)| v);
        loop {
            // oldest open node attaining the best bound
            let mut best: Option<(usize, &Rational)> = None;
            for (pos, &id) in open.iter().enumerate() {
                if let Some((v, _)) = &nodes[id].lp {
                    if best.is_none_or(|(_, b)| v > b) {
                        best = Some((pos, v));
                    }
                }
            }
            let Some((pos, z_bb)) = best else { break };
            if z_cp.as_ref().is_some_and(|z| z_bb <= z) {
                break;
            }
            let id = open.remove(pos);
            let v = nodes[id].lp.as_ref().expect("feasible").1.clone();
            let j = proof.steps[..i]
                .iter()
                .position(|s| !s.cut.is_satisfied_by(&v))
                .expect("a vertex above the cutting-plane bound violates an earlier cut");
            let d = proof.steps[j].disjunction.clone();
            let mut kids = Vec::with_capacity(d.pieces.len());
            for piece in &d.pieces {
                let region = nodes[id].region.with_all(&piece.ineqs);
                let value = lp(&region)?;
                kids.push(nodes.len());
                open.push(nodes.len());
                nodes.push(SimNode {
                    kind: NodeKind::Leaf,
                    children: vec![],
                    region,
                    lp: value,
                });
            }
            nodes[id].kind = NodeKind::Branch { disjunction: d };
            nodes[id].children = kids;
        }
    }

    fn build(nodes: &[SimNode], i: usize) -> BcNode {
        BcNode {
            kind: nodes[i].kind.clone(),
            children: nodes[i].children.iter().map(|&c| build(nodes, c)).collect(),
        }
    }
    let tree = BcProofTree {
        root: build(&nodes, 0),
        target: proof.target.clone(),
    };
    if let Verdict::Reject { at, reason } = verify_bc_proof(inst, &tree)? {
        return Err(TransformError::OutputRejected(format!("{at}: {reason}")));
    }
    let mut m = 0;
    for s in &proof.steps {
        m = m.max(complexity(&s.disjunction)?);
    }
    Ok(Simulation { tree, m, k })
}
