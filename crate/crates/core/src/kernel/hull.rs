use num_traits::Zero;

use super::dd::extreme_rays;
use super::linalg::{null_space, rref};
use super::lp::{solve_lp, LinearProgram, LpStatus, RowKind, Sense};
use super::{check_scale, HPolytope, KernelError, LinearInequality, VRep};
use crate::disjunctions::Disjunction;
use crate::scalar::Scalar;

/// All vertices of a bounded polytope, sorted lexicographically.
pub fn enumerate_vertices<F: Scalar>(p: &HPolytope<F>) -> Result<VRep<F>, KernelError> {
    check_scale(p.dim)?;
    let n = p.dim;
    // cone {(t, x) : t*b - a.x >= 0, t >= 0}; vertices are rays with t > 0
    let mut rows: Vec<Vec<F>> = p
        .ineqs
        .iter()
        .map(|h| {
            let mut r = Vec::with_capacity(n + 1);
            r.push(h.rhs.clone());
            r.extend(h.normal.iter().map(|a| -a.clone()));
            r
        })
        .collect();
    let mut t_row = vec![F::zero(); n + 1];
    t_row[0] = F::one();
    rows.push(t_row);

    let Some(rays) = extreme_rays(&rows, n + 1) else {
        // not pointed: either empty or has a line
        if p.is_empty()? {
            return Ok(VRep::new(vec![]));
        }
        return Err(KernelError::Unbounded);
    };
    let mut vertices = Vec::new();
    let mut recession = false;
    for r in rays {
        if r[0].is_zero() {
            recession = true;
            continue;
        }
        let t = r[0].clone();
        vertices.push(r[1..].iter().map(|x| x.clone() / t.clone()).collect());
    }
    if recession && !vertices.is_empty() {
        return Err(KernelError::Unbounded);
    }
    Ok(VRep::new(vertices))
}

/// Irredundant H-description of `conv(points)` in dimension `dim`. Lower
/// dimensional hulls carry their affine hull as pairs of opposite inequalities.
/// Inequalities are canonical and sorted.
pub fn convex_hull<F: Scalar>(points: &VRep<F>, dim: usize) -> Result<HPolytope<F>, KernelError> {
    check_scale(dim)?;
    let Some(v0) = points.vertices.first() else {
        return Err(KernelError::EmptyPointSet);
    };
    for v in &points.vertices {
        if v.len() != dim {
            return Err(KernelError::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
    }
    let diffs: Vec<Vec<F>> = points.vertices[1..]
        .iter()
        .map(|v| v.iter().zip(v0).map(|(a, b)| a.clone() - b.clone()).collect())
        .collect();

    let mut ineqs = Vec::new();
    for e in null_space(&diffs, dim) {
        let rhs = super::dot(&e, v0);
        let h = LinearInequality::new(e, rhs);
        ineqs.push(h.reversed().canonical());
        ineqs.push(h.canonical());
    }

    let mut reduced = diffs.clone();
    let pivots = rref(&mut reduced);
    let k = pivots.len();
    if k > 0 {
        // facets of the projection onto the pivot coordinates, which is injective on the affine hull
        let rows: Vec<Vec<F>> = points
            .vertices
            .iter()
            .map(|v| {
                let mut r = Vec::with_capacity(k + 1);
                r.push(F::one());
                r.extend(pivots.iter().map(|&c| -v[c].clone()));
                r
            })
            .collect();
        let rays = extreme_rays(&rows, k + 1).expect("full-dimensional projection gives a pointed cone");
        for ray in rays {
            if ray[1..].iter().all(Zero::is_zero) {
                continue;
            }
            let mut normal = vec![F::zero(); dim];
            for (j, &c) in pivots.iter().enumerate() {
                normal[c] = ray[j + 1].clone();
            }
            ineqs.push(LinearInequality::new(normal, ray[0].clone()).canonical());
        }
    }
    ineqs.sort();
    ineqs.dedup();
    HPolytope::new(dim, ineqs)
}

/// `P` with `h` appended. Emptiness is not decided here.
pub fn intersect<F: Scalar>(
    p: &HPolytope<F>,
    h: &LinearInequality<F>,
) -> Result<HPolytope<F>, KernelError> {
    if h.dim() != p.dim {
        return Err(KernelError::DimensionMismatch {
            expected: p.dim,
            found: h.dim(),
        });
    }
    Ok(p.with(h.clone()))
}

/// `conv(U_j (P ∩ Q_j))`; the canonical empty polytope when every piece misses `P`.
pub fn disjunctive_hull<F: Scalar>(
    p: &HPolytope<F>,
    d: &Disjunction<F>,
) -> Result<HPolytope<F>, KernelError> {
    if d.dim != p.dim {
        return Err(KernelError::DimensionMismatch {
            expected: p.dim,
            found: d.dim,
        });
    }
    check_scale(p.dim)?;
    let mut points = Vec::new();
    for piece in &d.pieces {
        let part = p.with_all(&piece.ineqs);
        points.extend(enumerate_vertices(&part)?.vertices);
    }
    if points.is_empty() {
        return Ok(HPolytope::empty(p.dim));
    }
    convex_hull(&VRep::new(points), p.dim)
}

/// `P x Q` as a block-diagonal system.
pub fn cartesian_product<F: Scalar>(p: &HPolytope<F>, q: &HPolytope<F>) -> HPolytope<F> {
    let dim = p.dim + q.dim;
    let mut ineqs = Vec::with_capacity(p.ineqs.len() + q.ineqs.len());
    for h in &p.ineqs {
        let mut normal = h.normal.clone();
        normal.extend(std::iter::repeat_n(F::zero(), q.dim));
        ineqs.push(LinearInequality::new(normal, h.rhs.clone()));
    }
    for h in &q.ineqs {
        let mut normal = vec![F::zero(); p.dim];
        normal.extend(h.normal.iter().cloned());
        ineqs.push(LinearInequality::new(normal, h.rhs.clone()));
    }
    HPolytope { dim, ineqs }
}

/// Drops inequalities implied by the remaining ones (one LP each), after
/// canonicalizing and deduplicating. Works for unbounded polyhedra too.
pub fn remove_redundant<F: Scalar>(p: &HPolytope<F>) -> Result<HPolytope<F>, KernelError> {
    let n = p.dim;
    if feasibility(p) == LpStatus::Infeasible {
        return Ok(HPolytope::empty(n));
    }
    let mut ineqs: Vec<LinearInequality<F>> = p.ineqs.iter().map(|h| h.canonical()).collect();
    ineqs.sort();
    ineqs.dedup();
    let mut i = 0;
    while i < ineqs.len() {
        let h = &ineqs[i];
        let redundant = if h.has_zero_normal() {
            !h.rhs.is_negative()
        } else {
            let mut lp = LinearProgram::new(n);
            for (j, g) in ineqs.iter().enumerate() {
                if j != i {
                    lp.push(g.normal.clone(), RowKind::Le, g.rhs.clone());
                }
            }
            match lp.maximize_lex(std::slice::from_ref(&h.normal)) {
                LpStatus::Optimal(x) => super::dot(&h.normal, &x) <= h.rhs,
                LpStatus::Unbounded => false,
                LpStatus::Infeasible => unreachable!("a feasible system stays feasible after dropping a row"),
            }
        };
        if redundant {
            ineqs.remove(i);
        } else {
            i += 1;
        }
    }
    HPolytope::new(n, ineqs)
}

fn feasibility<F: Scalar>(p: &HPolytope<F>) -> LpStatus<F> {
    let mut lp = LinearProgram::new(p.dim);
    for h in &p.ineqs {
        lp.push(h.normal.clone(), RowKind::Le, h.rhs.clone());
    }
    lp.maximize_lex(&[vec![F::zero(); p.dim]])
}

/// Canonical irredundant description of a bounded polytope, via its vertices.
/// Equal polytopes map to identical systems.
pub fn canonicalize<F: Scalar>(p: &HPolytope<F>) -> Result<HPolytope<F>, KernelError> {
    let v = enumerate_vertices(p)?;
    if v.is_empty() {
        return Ok(HPolytope::empty(p.dim));
    }
    convex_hull(&v, p.dim)
}

/// Lower and upper corner of a box.
pub type Corners<F> = (Vec<F>, Vec<F>);

/// Exact per-coordinate minima and maxima; `None` when empty.
pub fn bounding_box<F: Scalar>(p: &HPolytope<F>) -> Result<Option<Corners<F>>, KernelError> {
    let n = p.dim;
    let mut lo = Vec::with_capacity(n);
    let mut hi = Vec::with_capacity(n);
    for i in 0..n {
        let mut e = vec![F::zero(); n];
        e[i] = F::one();
        match solve_lp(p, &e, Sense::Min)?.value() {
            None => return Ok(None),
            Some(v) => lo.push(v.clone()),
        }
        hi.push(
            solve_lp(p, &e, Sense::Max)?
                .value()
                .cloned()
                .expect("feasible in the min direction"),
        );
    }
    Ok(Some((lo, hi)))
}

/// `P ⊆ Q`, checked with one LP per inequality of `Q`.
pub fn is_subset<F: Scalar>(p: &HPolytope<F>, q: &HPolytope<F>) -> Result<bool, KernelError> {
    for h in &q.ineqs {
        if !p.implies(h)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(v: i64) -> Rational {
        Rational::int(v)
    }

    fn fr(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn pts(v: &[&[Rational]]) -> VRep {
        VRep::new(v.iter().map(|p| p.to_vec()).collect())
    }

    #[test]
    fn unit_square_vertices() {
        let v = enumerate_vertices(&HPolytope::<Rational>::unit_cube(2)).unwrap();
        assert_eq!(
            v,
            pts(&[&[q(0), q(0)], &[q(0), q(1)], &[q(1), q(0)], &[q(1), q(1)]])
        );
    }

    #[test]
    fn simplex_hull() {
        let h = convex_hull(&pts(&[&[q(0), q(0)], &[q(1), q(0)], &[q(0), q(1)]]), 2).unwrap();
        let expected = vec![
            LinearInequality::from_ints(&[-1, 0], 0),
            LinearInequality::from_ints(&[0, -1], 0),
            LinearInequality::from_ints(&[1, 1], 1),
        ];
        let mut got = h.ineqs.clone();
        got.sort();
        let mut exp = expected;
        exp.sort();
        assert_eq!(got, exp);
    }

    #[test]
    fn single_point_hull() {
        let p = [fr(1, 2), q(3)];
        let h = convex_hull(&pts(&[&p]), 2).unwrap();
        for c in [[q(1), q(0)], [q(2), q(-5)], [q(0), q(1)]] {
            let max = solve_lp(&h, &c, Sense::Max).unwrap();
            let min = solve_lp(&h, &c, Sense::Min).unwrap();
            let expected = super::super::dot(&c, &p);
            assert_eq!(max.value(), Some(&expected));
            assert_eq!(min.value(), Some(&expected));
        }
        assert_eq!(enumerate_vertices(&h).unwrap(), pts(&[&p]));
    }

    #[test]
    fn segment_hull_round_trip() {
        let v = pts(&[&[q(0), q(0), q(1)], &[q(2), q(1), q(1)]]);
        let h = convex_hull(&v, 3).unwrap();
        assert_eq!(enumerate_vertices(&h).unwrap(), v);
    }

    #[test]
    fn empty_polytope_has_no_vertices() {
        let e = HPolytope::<Rational>::empty(2);
        assert!(enumerate_vertices(&e).unwrap().is_empty());
    }

    #[test]
    fn unbounded_is_reported() {
        let p = HPolytope::<Rational>::new(2, vec![LinearInequality::from_ints(&[-1, 0], 0)]).unwrap();
        assert_eq!(enumerate_vertices(&p), Err(KernelError::Unbounded));
        let p = HPolytope::<Rational>::new(
            2,
            vec![
                LinearInequality::from_ints(&[-1, 0], 0),
                LinearInequality::from_ints(&[0, -1], 0),
            ],
        )
        .unwrap();
        assert_eq!(enumerate_vertices(&p), Err(KernelError::Unbounded));
    }

    #[test]
    fn scale_guard_rejects_large_dimension() {
        let p = HPolytope::<Rational>::unit_cube(7);
        if std::env::var(super::super::SCALE_GUARD_ENV).is_err() {
            assert!(matches!(
                enumerate_vertices(&p),
                Err(KernelError::ScaleLimit { dim: 7, .. })
            ));
        }
    }

    #[test]
    fn redundancy_removal() {
        let p = HPolytope::<Rational>::new(
            2,
            vec![
                LinearInequality::from_ints(&[1, 0], 1),
                LinearInequality::from_ints(&[2, 0], 2),
                LinearInequality::from_ints(&[1, 0], 5),
                LinearInequality::from_ints(&[0, 0], 1),
                LinearInequality::from_ints(&[1, 1], 3),
            ],
        )
        .unwrap();
        let r = remove_redundant(&p).unwrap();
        assert_eq!(r.ineqs, vec![LinearInequality::from_ints(&[1, 0], 1), LinearInequality::from_ints(&[1, 1], 3)]);
    }
}
