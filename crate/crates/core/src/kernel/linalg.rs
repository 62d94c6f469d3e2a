use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::Scalar;

pub fn dot<F: Scalar>(a: &[F], b: &[F]) -> F {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = F::zero();
    for (x, y) in a.iter().zip(b) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        acc = acc + x.clone() * y.clone();
    }
    acc
}

/// Reduced row echelon form in place; returns the pivot columns.
pub(crate) fn rref<F: Scalar>(m: &mut [Vec<F>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = F::one() / m[r][c].clone();
        for v in m[r].iter_mut() {
            if !v.is_zero() {
                *v = v.clone() * inv.clone();
            }
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v = v.clone() - f.clone() * p.clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of `{x : M x = 0}` for an `r x cols` matrix.
pub(crate) fn null_space<F: Scalar>(m: &[Vec<F>], cols: usize) -> Vec<Vec<F>> {
    let mut a: Vec<Vec<F>> = m.to_vec();
    let pivots = rref(&mut a);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![F::zero(); cols];
        v[free] = F::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Greedily picks row indices forming a maximal independent set, in order.
pub(crate) fn independent_rows<F: Scalar>(rows: &[Vec<F>], cols: usize) -> Vec<usize> {
    let mut echelon: Vec<(usize, Vec<F>)> = Vec::new(); // (pivot col, reduced row)
    let mut chosen = Vec::new();
    for (idx, row) in rows.iter().enumerate() {
        let mut v = row.clone();
        for (pc, e) in &echelon {
            if !v[*pc].is_zero() {
                let f = v[*pc].clone();
                for (x, y) in v.iter_mut().zip(e) {
                    if !y.is_zero() {
                        *x = x.clone() - f.clone() * y.clone();
                    }
                }
            }
        }
        if let Some(pc) = (0..cols).find(|&c| !v[c].is_zero()) {
            let inv = F::one() / v[pc].clone();
            for x in v.iter_mut() {
                *x = x.clone() * inv.clone();
            }
            // keep echelon fully reduced so later eliminations stay one pass
            for (_, e) in echelon.iter_mut() {
                if !e[pc].is_zero() {
                    let f = e[pc].clone();
                    for (x, y) in e.iter_mut().zip(&v) {
                        if !y.is_zero() {
                            *x = x.clone() - f.clone() * y.clone();
                        }
                    }
                }
            }
            echelon.push((pc, v));
            chosen.push(idx);
            if chosen.len() == cols {
                break;
            }
        }
    }
    chosen
}

/// Inverse of a square nonsingular matrix.
pub(crate) fn inverse<F: Scalar>(m: &[Vec<F>]) -> Option<Vec<Vec<F>>> {
    let n = m.len();
    if n == 0 {
        return Some(vec![]);
    }
    let mut aug: Vec<Vec<F>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Positive multiple of `v` with coprime integer entries (zero stays zero).
pub(crate) fn primitive<F: Scalar>(v: &[F]) -> Vec<F> {
    let mut lcm = F::Int::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<F::Int> = v
        .iter()
        .map(|x| x.numer().clone() * (lcm.clone() / x.denom().clone()))
        .collect();
    let mut gcd = F::Int::zero();
    for x in &ints {
        gcd = gcd.gcd(x);
    }
    if gcd.is_zero() {
        return v.to_vec();
    }
    ints.into_iter()
        .map(|x| F::from_int(x / gcd.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::int(x)).collect()
    }

    #[test]
    fn null_space_of_rank_one() {
        let m = vec![q(&[1, 1, 1])];
        let ns = null_space(&m, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(dot(&m[0], &v).is_zero());
        }
    }

    #[test]
    fn inverse_round_trip() {
        let m = vec![q(&[2, 1]), q(&[1, 1])];
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, vec![q(&[1, -1]), q(&[-1, 2])]);
        assert!(inverse(&[q(&[1, 2]), q(&[2, 4])]).is_none());
    }

    #[test]
    fn independent_rows_skips_dependent() {
        let rows = vec![q(&[1, 0]), q(&[2, 0]), q(&[1, 1])];
        assert_eq!(independent_rows(&rows, 2), vec![0, 2]);
    }

    #[test]
    fn primitive_scaling() {
        let v = vec![
            Rational::new(1.into(), 2.into()),
            Rational::new((-3).into(), 4.into()),
        ];
        assert_eq!(primitive(&v), q(&[2, -3]));
    }
}
