//! Versioned JSON files for instances and proofs.
//!
//! Every rational is written as a `"p/q"` string in lowest terms; reading also
//! accepts bare integers written as strings (`"3"`). No floats are involved.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::disjunctions::{Disjunction, IntegralityPattern};
use crate::engine::{EngineError, Instance};
use crate::kernel::KernelError;
use crate::proofs::{BcNode, BcProofTree, CpProof, CutStep, NodeKind, Proof};
use crate::scalar::{format_exact, parse_exact};
use crate::{Inequality, Polytope, Rational};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("bad rational {0:?}: {1}")]
    Rational(String, String),
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

#[derive(Serialize, Deserialize)]
struct IneqFile {
    a: Vec<String>,
    b: String,
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    version: u32,
    dim: usize,
    ineqs: Vec<IneqFile>,
    objective: Vec<String>,
    integrality: Vec<bool>,
    claimed_bound: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct DisjunctionFile {
    label: String,
    pieces: Vec<Vec<IneqFile>>,
}

#[derive(Serialize, Deserialize)]
struct StepFile {
    disjunction: DisjunctionFile,
    cut: IneqFile,
}

#[derive(Serialize, Deserialize)]
struct CpFile {
    version: u32,
    target: IneqFile,
    steps: Vec<StepFile>,
}

#[derive(Serialize, Deserialize)]
struct NodeFile {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    disjunction: Option<DisjunctionFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cut: Option<IneqFile>,
    #[serde(default)]
    children: Vec<NodeFile>,
}

#[derive(Serialize, Deserialize)]
struct TreeFile {
    version: u32,
    target: IneqFile,
    root: NodeFile,
}

fn q(s: &str) -> Result<Rational, FormatError> {
    parse_exact(s).map_err(|e| FormatError::Rational(s.to_string(), e))
}

fn qs(v: &[String]) -> Result<Vec<Rational>, FormatError> {
    v.iter().map(|s| q(s)).collect()
}

fn strs(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_exact).collect()
}

fn ineq_out(h: &Inequality) -> IneqFile {
    IneqFile {
        a: strs(&h.normal),
        b: format_exact(&h.rhs),
    }
}

fn ineq_in(f: &IneqFile, dim: usize) -> Result<Inequality, FormatError> {
    if f.a.len() != dim {
        return Err(FormatError::Shape(format!(
            "inequality has {} coefficients, expected {dim}",
            f.a.len()
        )));
    }
    Ok(Inequality::new(qs(&f.a)?, q(&f.b)?))
}

fn disjunction_out(d: &Disjunction) -> DisjunctionFile {
    DisjunctionFile {
        label: d.label.clone(),
        pieces: d.pieces.iter().map(|p| p.ineqs.iter().map(ineq_out).collect()).collect(),
    }
}

fn disjunction_in(f: &DisjunctionFile, dim: usize) -> Result<Disjunction, FormatError> {
    let pieces = f
        .pieces
        .iter()
        .map(|p| {
            let ineqs = p.iter().map(|h| ineq_in(h, dim)).collect::<Result<_, _>>()?;
            Ok(Polytope::new(dim, ineqs)?)
        })
        .collect::<Result<Vec<_>, FormatError>>()?;
    Disjunction::new(dim, pieces, f.label.clone()).map_err(|e| FormatError::Shape(e.to_string()))
}

fn check_version(v: u32) -> Result<(), FormatError> {
    if v == FORMAT_VERSION {
        Ok(())
    } else {
        Err(FormatError::Version(v))
    }
}

pub fn instance_to_json(inst: &Instance) -> String {
    let n = inst.dim();
    let file = InstanceFile {
        version: FORMAT_VERSION,
        dim: n,
        ineqs: inst.polytope.ineqs.iter().map(ineq_out).collect(),
        objective: strs(&inst.objective),
        integrality: (0..n).map(|i| inst.pattern.is_integral(i)).collect(),
        claimed_bound: inst.claimed_bound.as_ref().map(format_exact),
    };
    serde_json::to_string_pretty(&file).expect("plain data serializes")
}

pub fn instance_from_json(text: &str) -> Result<Instance, FormatError> {
    let f: InstanceFile = serde_json::from_str(text)?;
    check_version(f.version)?;
    let ineqs = f.ineqs.iter().map(|h| ineq_in(h, f.dim)).collect::<Result<_, _>>()?;
    if f.objective.len() != f.dim || f.integrality.len() != f.dim {
        return Err(FormatError::Shape("objective or integrality has the wrong length".into()));
    }
    let pattern = IntegralityPattern {
        mask: f.integrality.clone(),
    };
    let claimed = f.claimed_bound.as_deref().map(q).transpose()?;
    Ok(Instance::new(Polytope::new(f.dim, ineqs)?, qs(&f.objective)?, pattern, claimed)?)
}

pub fn cp_proof_to_json(p: &CpProof) -> String {
    let file = CpFile {
        version: FORMAT_VERSION,
        target: ineq_out(&p.target),
        steps: p
            .steps
            .iter()
            .map(|s| StepFile {
                disjunction: disjunction_out(&s.disjunction),
                cut: ineq_out(&s.cut),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("plain data serializes")
}

fn cp_from_file(f: &CpFile, dim: usize) -> Result<CpProof, FormatError> {
    check_version(f.version)?;
    let steps = f
        .steps
        .iter()
        .map(|s| {
            Ok(CutStep {
                disjunction: disjunction_in(&s.disjunction, dim)?,
                cut: ineq_in(&s.cut, dim)?,
            })
        })
        .collect::<Result<_, FormatError>>()?;
    Ok(CpProof::new(steps, ineq_in(&f.target, dim)?))
}

pub fn cp_proof_from_json(text: &str, dim: usize) -> Result<CpProof, FormatError> {
    cp_from_file(&serde_json::from_str(text)?, dim)
}

fn node_out(n: &BcNode) -> NodeFile {
    let (kind, disjunction, cut) = match &n.kind {
        NodeKind::Leaf => ("leaf", None, None),
        NodeKind::Cut { disjunction, cut } => ("cut", Some(disjunction_out(disjunction)), Some(ineq_out(cut))),
        NodeKind::Branch { disjunction } => ("branch", Some(disjunction_out(disjunction)), None),
    };
    NodeFile {
        kind: kind.into(),
        disjunction,
        cut,
        children: n.children.iter().map(node_out).collect(),
    }
}

fn node_in(f: &NodeFile, dim: usize) -> Result<BcNode, FormatError> {
    let children = f.children.iter().map(|c| node_in(c, dim)).collect::<Result<Vec<_>, _>>()?;
    let need_d = || {
        f.disjunction
            .as_ref()
            .ok_or_else(|| FormatError::Shape(format!("{} node without a disjunction", f.kind)))
    };
    let kind = match f.kind.as_str() {
        "leaf" => NodeKind::Leaf,
        "branch" => NodeKind::Branch {
            disjunction: disjunction_in(need_d()?, dim)?,
        },
        "cut" => NodeKind::Cut {
            disjunction: disjunction_in(need_d()?, dim)?,
            cut: ineq_in(
                f.cut
                    .as_ref()
                    .ok_or_else(|| FormatError::Shape("cut node without a cut".into()))?,
                dim,
            )?,
        },
        other => return Err(FormatError::Shape(format!("unknown node kind {other:?}"))),
    };
    Ok(BcNode { kind, children })
}

pub fn bc_tree_to_json(t: &BcProofTree) -> String {
    let file = TreeFile {
        version: FORMAT_VERSION,
        target: ineq_out(&t.target),
        root: node_out(&t.root),
    };
    serde_json::to_string_pretty(&file).expect("plain data serializes")
}

fn tree_from_file(f: &TreeFile, dim: usize) -> Result<BcProofTree, FormatError> {
    check_version(f.version)?;
    Ok(BcProofTree {
        root: node_in(&f.root, dim)?,
        target: ineq_in(&f.target, dim)?,
    })
}

pub fn bc_tree_from_json(text: &str, dim: usize) -> Result<BcProofTree, FormatError> {
    tree_from_file(&serde_json::from_str(text)?, dim)
}

pub fn proof_to_json(p: &Proof) -> String {
    match p {
        Proof::Cp(p) => cp_proof_to_json(p),
        Proof::Tree(t) => bc_tree_to_json(t),
    }
}

/// Reads either proof kind; trees are recognised by their `root` field.
pub fn proof_from_json(text: &str, dim: usize) -> Result<Proof, FormatError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.get("root").is_some() {
        Ok(Proof::Tree(tree_from_file(&serde_json::from_value(value)?, dim)?))
    } else {
        Ok(Proof::Cp(cp_from_file(&serde_json::from_value(value)?, dim)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disjunctions::var;
    use crate::instances::gen_k3_copies;

    #[test]
    fn instance_round_trip() {
        let inst = gen_k3_copies(2).unwrap();
        let text = instance_to_json(&inst);
        assert!(text.contains("\"1/1\""));
        assert_eq!(instance_from_json(&text).unwrap(), inst);
    }

    #[test]
    fn proofs_round_trip() {
        let n = 2;
        let cut = Inequality::from_ints(&[1, 0], 0);
        let step = CutStep {
            disjunction: var(0, 0, n),
            cut: cut.clone(),
        };
        let cp = CpProof::new(vec![step], Inequality::from_ints(&[1, 1], 1));
        assert_eq!(cp_proof_from_json(&cp_proof_to_json(&cp), n).unwrap(), cp);

        let tree = BcProofTree {
            root: BcNode::cut(var(1, 0, n), cut, BcNode::branch(var(0, 0, n), vec![BcNode::leaf(), BcNode::leaf()])),
            target: Inequality::infeasible(n),
        };
        let text = bc_tree_to_json(&tree);
        assert_eq!(proof_from_json(&text, n).unwrap(), Proof::Tree(tree));
    }

    #[test]
    fn rejects_wrong_version_and_floats() {
        let inst = gen_k3_copies(1).unwrap();
        let text = instance_to_json(&inst).replace("\"version\": 1", "\"version\": 2");
        assert!(matches!(instance_from_json(&text), Err(FormatError::Version(2))));
        let text = instance_to_json(&inst).replace("\"1/1\"", "\"0.5\"");
        assert!(instance_from_json(&text).is_err());
    }
}
