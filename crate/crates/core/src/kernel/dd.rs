//! Double description method for the extreme rays of a pointed cone
//! `{y : M y >= 0}`, with exact arithmetic and the combinatorial adjacency test.


use super::linalg::{dot, independent_rows, inverse, primitive};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
struct ZeroSet(Vec<u64>);

impl ZeroSet {
    fn new(bits: usize) -> Self {
        Self(vec![0; bits.div_ceil(64).max(1)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    fn subset_of(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

struct Ray<F> {
    v: Vec<F>,
    zeros: ZeroSet,
}

/// Extreme rays (primitive integer representatives, sorted) of `{y : M y >= 0}`.
/// Returns `None` if `M` does not have full column rank, i.e. the cone is not pointed.
pub(crate) fn extreme_rays<F: Scalar>(m: &[Vec<F>], cols: usize) -> Option<Vec<Vec<F>>> {
    let basis = independent_rows(m, cols);
    if basis.len() < cols {
        return None;
    }
    let sub: Vec<Vec<F>> = basis.iter().map(|&i| m[i].clone()).collect();
    let inv = inverse(&sub).expect("independent rows form a nonsingular matrix");

    let mut rays: Vec<Ray<F>> = (0..cols)
        .map(|k| {
            let v: Vec<F> = inv.iter().map(|row| row[k].clone()).collect();
            let mut zeros = ZeroSet::new(m.len());
            for (j, &bi) in basis.iter().enumerate() {
                if j != k {
                    zeros.insert(bi);
                }
            }
            Ray {
                v: primitive(&v),
                zeros,
            }
        })
        .collect();

    let mut in_basis = vec![false; m.len()];
    for &b in &basis {
        in_basis[b] = true;
    }
    // adjacency needs at least cols - 2 common constraints
    let need = cols.saturating_sub(2) as u32;

    for (h, row) in m.iter().enumerate() {
        if in_basis[h] {
            continue;
        }
        let vals: Vec<F> = rays.iter().map(|r| dot(row, &r.v)).collect();
        if vals.iter().all(|v| !v.is_negative()) {
            for (r, v) in rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    r.zeros.insert(h);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();

        let mut fresh = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].zeros.and(&rays[q].zeros);
                if common.count() < need {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == p || k == q || !common.subset_of(&r.zeros));
                if !adjacent {
                    continue;
                }
                let a = vals[p].clone();
                let b = -vals[q].clone();
                let v: Vec<F> = rays[q]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(x, y)| a.clone() * x.clone() + b.clone() * y.clone())
                    .collect();
                let mut zeros = common;
                zeros.insert(h);
                fresh.push(Ray {
                    v: primitive(&v),
                    zeros,
                });
            }
        }

        let mut next = Vec::with_capacity(rays.len() + fresh.len());
        for (mut r, v) in rays.into_iter().zip(vals) {
            if v.is_negative() {
                continue;
            }
            if v.is_zero() {
                r.zeros.insert(h);
            }
            next.push(r);
        }
        next.extend(fresh);
        rays = next;
    }

    let mut out: Vec<Vec<F>> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    out.dedup();
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::int(x)).collect()
    }

    #[test]
    fn square_cone_rays() {
        // homogenized unit square: y0 >= 0, x >= 0, x <= y0
        let m = vec![
            q(&[0, 1, 0]),
            q(&[0, 0, 1]),
            q(&[1, -1, 0]),
            q(&[1, 0, -1]),
            q(&[1, 0, 0]),
        ];
        let rays = extreme_rays(&m, 3).unwrap();
        assert_eq!(
            rays,
            vec![q(&[1, 0, 0]), q(&[1, 0, 1]), q(&[1, 1, 0]), q(&[1, 1, 1])]
        );
    }

    #[test]
    fn non_pointed_cone_is_reported() {
        let m = vec![q(&[1, 0]), q(&[2, 0])];
        assert!(extreme_rays(&m, 2).is_none());
    }
}
