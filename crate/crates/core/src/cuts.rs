//! Cutting planes derived from a disjunction applied to a relaxation.
//!
//! [`cglp_cut`] solves the disjunctive cut-generating LP: for each piece
//! `P ∩ Q_j = {x : G_j x <= g_j}` it looks for multipliers `u_j >= 0` with
//! `alpha = G_j^T u_j` and `beta >= g_j . u_j`, normalised by `sum u = 1`, and
//! maximises the violation `alpha . x* - beta`. [`cg_cut`] is plain
//! Chvátal–Gomory rounding.


use crate::disjunctions::Disjunction;
use crate::kernel::lp::{LinearProgram, LpStatus, RowKind};
use crate::kernel::{dot, HPolytope, KernelError, LinearInequality};
use crate::scalar::Scalar;

/// A piece of a disjunction on which a claimed cut fails, with the LP witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceViolation<F> {
    pub piece: usize,
    pub point: Vec<F>,
    pub value: F,
}

/// First piece `j` with `max <cut.normal, x>` over `P ∩ Q_j` above `cut.rhs`.
pub fn violated_piece<F: Scalar>(
    p: &HPolytope<F>,
    d: &Disjunction<F>,
    cut: &LinearInequality<F>,
) -> Result<Option<PieceViolation<F>>, KernelError> {
    for (j, piece) in d.pieces.iter().enumerate() {
        let region = p.with_all(&piece.ineqs);
        let out = crate::kernel::solve_lp(&region, &cut.normal, crate::kernel::Sense::Max)?;
        if let Some(value) = out.value() {
            if *value > cut.rhs {
                return Ok(Some(PieceViolation {
                    piece: j,
                    point: out.point().expect("optimal").to_vec(),
                    value: value.clone(),
                }));
            }
        }
    }
    Ok(None)
}

/// A most violated cut for `x*` derivable from `d` on `p`, or `None` when `x*`
/// lies in the disjunctive hull. When every piece misses `p` the result is
/// the infeasibility cut `<0, x> <= -1`.
pub fn cglp_cut<F: Scalar>(
    p: &HPolytope<F>,
    d: &Disjunction<F>,
    x: &[F],
) -> Result<Option<LinearInequality<F>>, KernelError> {
    let n = p.dim;
    if d.dim != n || x.len() != n {
        return Err(KernelError::DimensionMismatch {
            expected: n,
            found: if d.dim != n { d.dim } else { x.len() },
        });
    }
    let mut regions = Vec::new();
    for piece in &d.pieces {
        let region = p.with_all(&piece.ineqs);
        if !region.is_empty()? {
            regions.push(region);
        }
    }
    if regions.is_empty() {
        return Ok(Some(LinearInequality::infeasible(n)));
    }

    // variables: alpha (n, free), beta (free), then the multipliers of each region
    let n_mult: usize = regions.iter().map(|r| r.ineqs.len()).sum();
    let total = n + 1 + n_mult;
    let mut lp = LinearProgram::new(total);
    for v in lp.nonneg.iter_mut().skip(n + 1) {
        *v = true;
    }
    let mut offset = n + 1;
    for region in &regions {
        for c in 0..n {
            let mut row = vec![F::zero(); total];
            row[c] = F::one();
            for (k, h) in region.ineqs.iter().enumerate() {
                row[offset + k] = -h.normal[c].clone();
            }
            lp.push(row, RowKind::Eq, F::zero());
        }
        let mut row = vec![F::zero(); total];
        row[n] = -F::one();
        for (k, h) in region.ineqs.iter().enumerate() {
            row[offset + k] = h.rhs.clone();
        }
        lp.push(row, RowKind::Le, F::zero());
        offset += region.ineqs.len();
    }
    let mut norm = vec![F::zero(); total];
    for v in norm.iter_mut().skip(n + 1) {
        *v = F::one();
    }
    lp.push(norm, RowKind::Eq, F::one());

    // maximise violation, then prefer lexicographically small (alpha, beta)
    let mut objectives = Vec::with_capacity(n + 2);
    let mut violation = vec![F::zero(); total];
    violation[..n].clone_from_slice(x);
    violation[n] = -F::one();
    objectives.push(violation);
    for c in 0..=n {
        let mut e = vec![F::zero(); total];
        e[c] = -F::one();
        objectives.push(e);
    }
    let sol = match lp.maximize_lex(&objectives) {
        LpStatus::Optimal(sol) => sol,
        LpStatus::Infeasible => unreachable!("a nonempty region always admits multipliers"),
        LpStatus::Unbounded => unreachable!("normalised multipliers bound the cut"),
    };
    let alpha = sol[..n].to_vec();
    let beta = sol[n].clone();
    if dot(&alpha, x) <= beta {
        return Ok(None);
    }
    let cut = LinearInequality::new(alpha, beta).canonical();
    let check = violated_piece(p, d, &cut)?;
    assert!(check.is_none(), "cut-generating LP produced an invalid cut: {check:?}");
    Ok(Some(cut))
}

/// Chvátal–Gomory rounding `<a, x> <= floor(max_P <a, x>)`. `a` is kept as given.
/// An empty `p` yields the infeasibility cut.
pub fn cg_cut<F: Scalar>(p: &HPolytope<F>, a: &[F]) -> Result<LinearInequality<F>, KernelError> {
    match p.max_of(a)? {
        Some(v) => Ok(LinearInequality::new(a.to_vec(), Scalar::floor(&v))),
        None => Ok(LinearInequality::infeasible(p.dim)),
    }
}

/// Whether `x` lies in `conv(U_j (P ∩ Q_j))`, decided through the CGLP.
pub fn in_disjunctive_hull<F: Scalar>(
    p: &HPolytope<F>,
    d: &Disjunction<F>,
    x: &[F],
) -> Result<bool, KernelError> {
    Ok(cglp_cut(p, d, x)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disjunctions::var;
    use crate::kernel::{disjunctive_hull, enumerate_vertices};
    use crate::Rational;

    fn k3() -> HPolytope<Rational> {
        let mut p = HPolytope::unit_cube(3);
        for e in [[1, 1, 0], [1, 0, 1], [0, 1, 1]] {
            p.ineqs.push(LinearInequality::from_ints(&e, 1));
        }
        p
    }

    fn half() -> Rational {
        Rational::new(1.into(), 2.into())
    }

    #[test]
    fn triangle_clique_cut() {
        let x = vec![half(); 3];
        for i in 0..3 {
            let cut = cglp_cut(&k3(), &var(i, 0, 3), &x).unwrap().unwrap();
            assert_eq!(cut, LinearInequality::from_ints(&[1, 1, 1], 1));
        }
    }

    #[test]
    fn hull_vertex_is_not_separated() {
        let p = k3();
        let d = var(0, 0, 3);
        let hull = disjunctive_hull(&p, &d).unwrap();
        for v in enumerate_vertices(&hull).unwrap().iter() {
            assert_eq!(cglp_cut(&p, &d, v).unwrap(), None);
        }
    }

    #[test]
    fn all_pieces_empty() {
        let p = HPolytope::box_from(&[half()], &[half()]);
        let cut = cglp_cut(&p, &var(0, 0, 1), &[half()]).unwrap().unwrap();
        assert_eq!(cut, LinearInequality::infeasible(1));
    }

    #[test]
    fn chvatal_gomory_rounding() {
        let a = vec![Rational::int(1); 3];
        assert_eq!(cg_cut(&k3(), &a).unwrap(), LinearInequality::from_ints(&[1, 1, 1], 1));
        let cube = HPolytope::<Rational>::unit_cube(3);
        let a = vec![Rational::int(2), Rational::int(-1), Rational::int(3)];
        assert_eq!(cg_cut(&cube, &a).unwrap().rhs, Rational::int(5));
    }
}
