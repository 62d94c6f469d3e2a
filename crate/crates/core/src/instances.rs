//! Instance generators: stable-set polytopes of clique families, the small
//! polytopes behind the separation results, and random 0/1 polytopes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::disjunctions::IntegralityPattern;
use crate::engine::{EngineError, Instance};
use crate::kernel::{cartesian_product, convex_hull, HPolytope, KernelError, LinearInequality, VRep};
use crate::{Polytope, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid graph: {0}")]
    Graph(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// A simple undirected graph on vertices `0..vertices`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphSpec {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl GraphSpec {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self, GenError> {
        let mut seen = std::collections::BTreeSet::new();
        for &(u, v) in &edges {
            if u >= vertices || v >= vertices {
                return Err(GenError::Graph(format!("edge ({u},{v}) leaves the vertex range")));
            }
            if u == v {
                return Err(GenError::Graph(format!("loop at vertex {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GenError::Graph(format!("repeated edge ({u},{v})")));
            }
        }
        Ok(Self { vertices, edges })
    }

    pub fn complete(k: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..k {
            for v in u + 1..k {
                edges.push((u, v));
            }
        }
        Self { vertices: k, edges }
    }

    /// `copies` disjoint copies of `K_k`; copy `c` uses vertices `c*k .. c*k + k`.
    pub fn clique_copies(copies: usize, k: usize) -> Self {
        let mut edges = Vec::new();
        for c in 0..copies {
            for u in 0..k {
                for v in u + 1..k {
                    edges.push((c * k + u, c * k + v));
                }
            }
        }
        Self {
            vertices: copies * k,
            edges,
        }
    }
}

fn int(v: i64) -> Rational {
    Rational::int(v)
}

/// `{x in [0,1]^V : x_u + x_v <= 1 for every edge}` maximising `sum x_v`.
/// Box inequalities come first (lower bounds, then upper), then edges.
pub fn stable_set_polytope(g: &GraphSpec) -> Result<Instance, GenError> {
    stable_set_with_bound(g, None)
}

fn stable_set_with_bound(g: &GraphSpec, bound: Option<Rational>) -> Result<Instance, GenError> {
    let n = g.vertices;
    let mut p: Polytope = HPolytope::unit_cube(n);
    for &(u, v) in &g.edges {
        let mut a = vec![int(0); n];
        a[u] = int(1);
        a[v] = int(1);
        p.ineqs.push(LinearInequality::new(a, int(1)));
    }
    Ok(Instance::new(
        p,
        vec![int(1); n],
        IntegralityPattern::all_integral(n),
        bound,
    )?)
}

/// `m` disjoint triangles; the integer optimum and claimed bound are `m`.
pub fn gen_k3_copies(m: usize) -> Result<Instance, GenError> {
    if m == 0 {
        return Err(GenError::Parameter("m must be at least 1".into()));
    }
    stable_set_with_bound(&GraphSpec::clique_copies(m, 3), Some(int(m as i64)))
}

/// `m` disjoint triangles plus a center vertex (the last coordinate) joined
/// to the listed triangle vertices, at most one per triangle.
pub fn gen_center_variant(m: usize, center_edges: &[usize]) -> Result<Instance, GenError> {
    if m == 0 {
        return Err(GenError::Parameter("m must be at least 1".into()));
    }
    let mut per_clique = vec![0; m];
    for &v in center_edges {
        if v >= 3 * m {
            return Err(GenError::Graph(format!("center edge to {v} leaves the clique vertices")));
        }
        per_clique[v / 3] += 1;
        if per_clique[v / 3] > 1 {
            return Err(GenError::Graph(format!(
                "clique {} has more than one vertex joined to the center",
                v / 3
            )));
        }
    }
    let mut g = GraphSpec::clique_copies(m, 3);
    let center = 3 * m;
    g.vertices += 1;
    g.edges.extend(center_edges.iter().map(|&v| (v, center)));
    let g = GraphSpec::new(g.vertices, g.edges)?;
    stable_set_with_bound(&g, Some(int(m as i64 + 1)))
}

/// `m` disjoint copies of `K_m` plus cross edges between copies; in each
/// copy at most `alpha * m` vertices may have cross edges.
#[derive(Debug, Clone)]
pub struct KmAlpha {
    pub instance: Instance,
    /// Set when `m < 3 / (1 - alpha)`, where the lower bound on cutting-plane
    /// proof length does not apply.
    pub warning: Option<String>,
}

pub fn gen_km_copies_alpha(m: usize, alpha: &Rational, cross_edges: &[(usize, usize)]) -> Result<KmAlpha, GenError> {
    if m < 2 {
        return Err(GenError::Parameter("m must be at least 2".into()));
    }
    if *alpha < int(0) || *alpha >= int(1) {
        return Err(GenError::Parameter(format!("alpha = {alpha} must lie in [0, 1)")));
    }
    let mut g = GraphSpec::clique_copies(m, m);
    let mut touched = vec![std::collections::BTreeSet::new(); m];
    for &(u, v) in cross_edges {
        if u >= m * m || v >= m * m {
            return Err(GenError::Graph(format!("cross edge ({u},{v}) leaves the vertex range")));
        }
        if u / m == v / m {
            return Err(GenError::Graph(format!("cross edge ({u},{v}) stays inside one clique")));
        }
        touched[u / m].insert(u);
        touched[v / m].insert(v);
    }
    let limit = alpha * int(m as i64);
    for (c, t) in touched.iter().enumerate() {
        if int(t.len() as i64) > limit {
            return Err(GenError::Graph(format!(
                "clique {c} has {} vertices with cross edges, more than alpha*m = {limit}",
                t.len()
            )));
        }
    }
    g.edges.extend_from_slice(cross_edges);
    let g = GraphSpec::new(g.vertices, g.edges)?;
    let threshold = int(3) / (int(1) - alpha);
    let warning = (int(m as i64) < threshold).then(|| {
        let msg = format!("m = {m} is below 3/(1-alpha) = {threshold}; the length lower bound does not apply");
        log::warn!("{msg}");
        msg
    });
    Ok(KmAlpha {
        instance: stable_set_with_bound(&g, Some(int(m as i64)))?,
        warning,
    })
}

fn frac(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// `conv{(0,0), (3/2,1), (2,2), (1,3/2)}`.
pub fn b_polytope() -> Polytope {
    let v = VRep::new(vec![
        vec![int(0), int(0)],
        vec![frac(3, 2), int(1)],
        vec![int(2), int(2)],
        vec![int(1), frac(3, 2)],
    ]);
    convex_hull(&v, 2).expect("four points in the plane")
}

/// `B x [-1/2, 1/2]^(n-2)`, maximising `x_1 - x_2` with claimed bound 0.
pub fn gen_b_cross_cube(n: usize) -> Result<Instance, GenError> {
    if n < 2 {
        return Err(GenError::Parameter("n must be at least 2".into()));
    }
    let mut p = b_polytope();
    if n > 2 {
        let cube = HPolytope::box_from(&vec![frac(-1, 2); n - 2], &vec![frac(1, 2); n - 2]);
        p = cartesian_product(&p, &cube);
    }
    let mut c = vec![int(0); n];
    c[0] = int(1);
    c[1] = int(-1);
    Ok(Instance::new(p, c, IntegralityPattern::all_integral(n), Some(int(0)))?)
}

fn apex_tetra(apex: Vec<Rational>) -> Result<Instance, GenError> {
    let v = VRep::new(vec![
        vec![int(0), int(0), int(0)],
        vec![int(0), int(2), int(0)],
        vec![int(2), int(0), int(0)],
        apex,
    ]);
    let p = convex_hull(&v, 3)?;
    Ok(Instance::new(
        p,
        vec![int(0), int(0), int(1)],
        IntegralityPattern::all_integral(3),
        Some(int(0)),
    )?)
}

/// `conv{(0,0,0), (0,2,0), (2,0,0), (1-1/h, 1-1/h, h)}`, maximising `x_3`
/// with claimed bound 0 (no integer point lies above the base).
pub fn gen_tetra_h(h: &Rational) -> Result<Instance, GenError> {
    if *h <= int(1) {
        return Err(GenError::Parameter(format!("h = {h} must exceed 1")));
    }
    let t = int(1) - int(1) / h;
    apex_tetra(vec![t.clone(), t, h.clone()])
}

/// `conv{(0,0,0), (2,0,0), (0,2,0), (1/2,1/2,h)}`, maximising `x_3`.
pub fn gen_reverse_split(h: &Rational) -> Result<Instance, GenError> {
    if *h <= int(0) {
        return Err(GenError::Parameter(format!("h = {h} must be positive")));
    }
    apex_tetra(vec![frac(1, 2), frac(1, 2), h.clone()])
}

/// A random polytope inside `[0,1]^n`: the box plus `round(2 n density)`
/// random cuts with integer coefficients in `[-3, 3]` and half-integral
/// right-hand sides, each kept feasible for a random 0/1 anchor point. The
/// objective has integer coefficients in `[-2, 3]`; the claimed bound is the
/// integer optimum. Identical seeds give identical instances.
pub fn random_01_polytope(seed: u64, n: usize, density: f64) -> Result<Instance, GenError> {
    if n == 0 || n > crate::kernel::DEFAULT_SCALE_LIMIT {
        return Err(GenError::Parameter(format!("n = {n} must be in 1..=6")));
    }
    if !(0.0..=8.0).contains(&density) {
        return Err(GenError::Parameter(format!("density {density} must be in [0, 8]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let anchor: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=1)).collect();
    let mut p: Polytope = HPolytope::unit_cube(n);
    let cuts = (2.0 * n as f64 * density).round() as usize;
    for _ in 0..cuts {
        let a: Vec<i64> = loop {
            let a: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
            if a.iter().filter(|&&v| v != 0).count() >= 2 {
                break a;
            }
        };
        let at_anchor: i64 = a.iter().zip(&anchor).map(|(x, y)| x * y).sum();
        let slack: i64 = rng.gen_range(0..=1);
        let rhs = frac(2 * (at_anchor + slack) + 1, 2);
        p.ineqs.push(LinearInequality::new(a.into_iter().map(int).collect(), rhs));
    }
    let c: Vec<Rational> = (0..n).map(|_| int(rng.gen_range(-2..=3))).collect();
    let inst = Instance::new(p, c, IntegralityPattern::all_integral(n), None)?;
    let best = inst.integer_optimum()?;
    Ok(Instance {
        claimed_bound: best,
        ..inst
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{enumerate_vertices, solve_lp, Sense};

    fn lp_value(inst: &Instance) -> Rational {
        solve_lp(&inst.polytope, &inst.objective, Sense::Max)
            .unwrap()
            .value()
            .cloned()
            .unwrap()
    }

    #[test]
    fn clique_lp_values() {
        let k3 = stable_set_polytope(&GraphSpec::complete(3)).unwrap();
        assert_eq!(k3.polytope.ineqs.len(), 9);
        assert_eq!(lp_value(&k3), frac(3, 2));
        let k5 = stable_set_polytope(&GraphSpec::complete(5)).unwrap();
        assert_eq!(lp_value(&k5), frac(5, 2));
        let empty = stable_set_polytope(&GraphSpec::new(3, vec![]).unwrap()).unwrap();
        assert_eq!(lp_value(&empty), int(3));
    }

    #[test]
    fn triangle_copies() {
        let one = gen_k3_copies(1).unwrap();
        assert_eq!(one.polytope, stable_set_polytope(&GraphSpec::complete(3)).unwrap().polytope);
        let two = gen_k3_copies(2).unwrap();
        assert_eq!(lp_value(&two), int(3));
        assert_eq!(two.integer_optimum().unwrap(), Some(int(2)));
        assert_eq!(two.claimed_bound, Some(int(2)));
    }

    #[test]
    fn center_variant_validation() {
        let i = gen_center_variant(2, &[0, 3]).unwrap();
        assert_eq!(i.dim(), 7);
        assert_eq!(i.claimed_bound, Some(int(3)));
        assert_eq!(i.integer_optimum().unwrap(), Some(int(3)));
        assert_eq!(gen_center_variant(1, &[]).unwrap().dim(), 4);
        assert!(gen_center_variant(2, &[0, 1]).is_err());
    }

    #[test]
    fn km_alpha_validation() {
        let g = gen_km_copies_alpha(3, &int(0), &[]).unwrap();
        assert_eq!(g.instance.dim(), 9);
        assert!(g.warning.is_none());
        let g = gen_km_copies_alpha(4, &frac(1, 4), &[(0, 4), (4, 8), (8, 12), (12, 0)]).unwrap();
        assert_eq!(g.instance.dim(), 16);
        let g = gen_km_copies_alpha(3, &frac(1, 3), &[(0, 3)]).unwrap();
        assert!(g.warning.is_some());
        assert!(gen_km_copies_alpha(4, &frac(1, 4), &[(0, 4), (1, 8)]).is_err());
    }

    #[test]
    fn b_cross_cube() {
        let b = gen_b_cross_cube(2).unwrap();
        let v = enumerate_vertices(&b.polytope).unwrap();
        assert_eq!(
            v.vertices,
            vec![
                vec![int(0), int(0)],
                vec![int(1), frac(3, 2)],
                vec![frac(3, 2), int(1)],
                vec![int(2), int(2)],
            ]
        );
        assert_eq!(lp_value(&b), frac(1, 2));
        let pts = b.lattice_points().unwrap();
        assert_eq!(pts, vec![vec![int(0), int(0)], vec![int(1), int(1)], vec![int(2), int(2)]]);
        let b4 = gen_b_cross_cube(4).unwrap();
        assert_eq!(lp_value(&b4), frac(1, 2));
        assert_eq!(enumerate_vertices(&b4.polytope).unwrap().len(), 16);
    }

    #[test]
    fn tetra_vertices_and_lattice() {
        let t = gen_tetra_h(&int(4)).unwrap();
        let v = enumerate_vertices(&t.polytope).unwrap();
        assert_eq!(
            v.vertices,
            vec![
                vec![int(0), int(0), int(0)],
                vec![int(0), int(2), int(0)],
                vec![frac(3, 4), frac(3, 4), int(4)],
                vec![int(2), int(0), int(0)],
            ]
        );
        let t2 = gen_tetra_h(&int(2)).unwrap();
        assert!(enumerate_vertices(&t2.polytope)
            .unwrap()
            .vertices
            .contains(&vec![frac(1, 2), frac(1, 2), int(2)]));
        let mut pts = t.lattice_points().unwrap();
        pts.sort();
        let mut expected: Vec<Vec<Rational>> = [[0, 0, 0], [0, 1, 0], [1, 0, 0], [0, 2, 0], [2, 0, 0], [1, 1, 0]]
            .iter()
            .map(|p| p.iter().map(|&v| int(v)).collect())
            .collect();
        expected.sort();
        assert_eq!(pts, expected);
    }

    #[test]
    fn reverse_split_apex() {
        for h in [int(4), int(1)] {
            let r = gen_reverse_split(&h).unwrap();
            assert!(enumerate_vertices(&r.polytope)
                .unwrap()
                .vertices
                .contains(&vec![frac(1, 2), frac(1, 2), h.clone()]));
            assert!(r.lattice_points().unwrap().iter().all(|p| p[2] <= int(0)));
        }
    }

    #[test]
    fn random_polytopes_are_deterministic() {
        let a = random_01_polytope(7, 4, 1.0).unwrap();
        let b = random_01_polytope(7, 4, 1.0).unwrap();
        assert_eq!(a, b);
        let cube = random_01_polytope(3, 3, 0.0).unwrap();
        assert_eq!(cube.polytope, HPolytope::unit_cube(3));
        for seed in 0..10 {
            let r = random_01_polytope(seed, 5, 0.8).unwrap();
            assert!(crate::transforms::check_in_unit_cube(&r.polytope).is_ok());
            assert!(r.claimed_bound.is_some());
        }
    }
}
