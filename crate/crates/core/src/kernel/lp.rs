//! Dense two-phase tableau simplex over an exact field.
//!
//! Pivoting follows Bland's rule, which terminates on degenerate problems. The
//! objective is a list of linear functions maximized lexicographically, which
//! makes the returned optimum unique: `solve_lp` appends `-x_1, ..., -x_n`, so
//! among all optimal points it reports the lexicographically smallest one.

use super::{HPolytope, KernelError, LpOutcome};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum RowKind {
    Le,
    Eq,
    #[cfg_attr(not(test), allow(dead_code))]
    Ge,
}

/// A linear program over `n_vars` variables, each either free or nonnegative.
#[derive(Debug, Clone)]
pub(crate) struct LinearProgram<F> {
    pub n_vars: usize,
    pub nonneg: Vec<bool>,
    pub rows: Vec<(Vec<F>, RowKind, F)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum LpStatus<F> {
    Infeasible,
    Unbounded,
    Optimal(Vec<F>),
}

impl<F: Scalar> LinearProgram<F> {
    pub fn new(n_vars: usize) -> Self {
        Self {
            n_vars,
            nonneg: vec![false; n_vars],
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, coeffs: Vec<F>, kind: RowKind, rhs: F) {
        debug_assert_eq!(coeffs.len(), self.n_vars);
        self.rows.push((coeffs, kind, rhs));
    }

    /// Maximizes `objectives[0]`, then `objectives[1]` over the optimal face, etc.
    pub fn maximize_lex(&self, objectives: &[Vec<F>]) -> LpStatus<F> {
        let mut t = Tableau::build(self);
        if t.has_artificials()
            && !t.phase_one() {
                return LpStatus::Infeasible;
            }
        let costs: Vec<Vec<F>> = objectives.iter().map(|o| t.column_costs(o)).collect();
        match t.optimize(costs) {
            true => LpStatus::Optimal(t.solution()),
            false => LpStatus::Unbounded,
        }
    }
}

struct Tableau<F> {
    /// Each row holds `ncols` coefficients followed by the rhs.
    rows: Vec<Vec<F>>,
    basis: Vec<usize>,
    ncols: usize,
    /// Columns `first_art..ncols` are artificial.
    first_art: usize,
    /// For each original variable: positive-part column and optional negative-part column.
    var_cols: Vec<(usize, Option<usize>)>,
}

impl<F: Scalar> Tableau<F> {
    fn build(lp: &LinearProgram<F>) -> Self {
        let mut var_cols = Vec::with_capacity(lp.n_vars);
        let mut ncols = 0;
        for j in 0..lp.n_vars {
            if lp.nonneg[j] {
                var_cols.push((ncols, None));
                ncols += 1;
            } else {
                var_cols.push((ncols, Some(ncols + 1)));
                ncols += 2;
            }
        }
        let mut slack_of = Vec::with_capacity(lp.rows.len());
        for (_, kind, _) in &lp.rows {
            if *kind == RowKind::Eq {
                slack_of.push(None);
            } else {
                slack_of.push(Some(ncols));
                ncols += 1;
            }
        }
        let first_art = ncols;

        let mut rows = Vec::with_capacity(lp.rows.len());
        let mut basis = Vec::with_capacity(lp.rows.len());
        let mut needs_art = Vec::new();
        for (r, (coeffs, kind, rhs)) in lp.rows.iter().enumerate() {
            let mut row = vec![F::zero(); ncols];
            for (j, a) in coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let (p, n) = var_cols[j];
                row[p] = a.clone();
                if let Some(n) = n {
                    row[n] = -a.clone();
                }
            }
            let mut slack_sign = match kind {
                RowKind::Le => F::one(),
                RowKind::Ge => -F::one(),
                RowKind::Eq => F::zero(),
            };
            let mut b = rhs.clone();
            if b.is_negative() {
                for v in row.iter_mut() {
                    if !v.is_zero() {
                        *v = -v.clone();
                    }
                }
                b = -b;
                slack_sign = -slack_sign;
            }
            if let Some(s) = slack_of[r] {
                row[s] = slack_sign.clone();
            }
            row.push(b);
            if slack_of[r].is_some() && slack_sign.is_one() {
                basis.push(slack_of[r].unwrap());
            } else {
                basis.push(usize::MAX);
                needs_art.push(r);
            }
            rows.push(row);
        }

        let n_art = needs_art.len();
        if n_art > 0 {
            for row in rows.iter_mut() {
                let rhs = row.pop().unwrap();
                row.extend(std::iter::repeat_n(F::zero(), n_art));
                row.push(rhs);
            }
            for (k, &r) in needs_art.iter().enumerate() {
                rows[r][first_art + k] = F::one();
                basis[r] = first_art + k;
            }
        }
        let ncols = first_art + n_art;
        Self {
            rows,
            basis,
            ncols,
            first_art,
            var_cols,
        }
    }

    fn has_artificials(&self) -> bool {
        self.ncols > self.first_art
    }

    /// Reduced costs for a cost vector over the current columns.
    fn reduced(&self, mut cost: Vec<F>) -> Vec<F> {
        cost.push(F::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = cost[b].clone();
            if cb.is_zero() {
                continue;
            }
            for (c, a) in cost.iter_mut().zip(row) {
                if !a.is_zero() {
                    *c = c.clone() - cb.clone() * a.clone();
                }
            }
        }
        cost
    }

    /// Cost vector over columns for a linear function of the original variables.
    fn column_costs(&self, objective: &[F]) -> Vec<F> {
        let mut cost = vec![F::zero(); self.ncols];
        for (j, c) in objective.iter().enumerate() {
            let (p, n) = self.var_cols[j];
            cost[p] = c.clone();
            if let Some(n) = n {
                cost[n] = -c.clone();
            }
        }
        self.reduced(cost)
    }

    /// Returns false if infeasible. On success the artificial columns are gone.
    fn phase_one(&mut self) -> bool {
        let mut cost = vec![F::zero(); self.ncols];
        for c in cost.iter_mut().skip(self.first_art) {
            *c = -F::one();
        }
        let d = self.reduced(cost);
        let bounded = self.optimize(vec![d]);
        debug_assert!(bounded, "phase one is always bounded");
        let infeasible = self
            .rows
            .iter()
            .zip(&self.basis)
            .any(|(row, &b)| b >= self.first_art && !row[self.ncols].is_zero());
        if infeasible {
            return false;
        }
        // Drive remaining artificials (at level zero) out of the basis.
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= self.first_art {
                match (0..self.first_art).find(|&j| !self.rows[r][j].is_zero()) {
                    Some(j) => {
                        self.pivot(r, j, &mut []);
                        r += 1;
                    }
                    None => {
                        self.rows.remove(r);
                        self.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }
        let keep = self.first_art;
        for row in self.rows.iter_mut() {
            let rhs = row.pop().unwrap();
            row.truncate(keep);
            row.push(rhs);
        }
        self.ncols = keep;
        true
    }

    fn lex_positive(costs: &[Vec<F>], j: usize) -> bool {
        for d in costs {
            if d[j].is_positive() {
                return true;
            }
            if d[j].is_negative() {
                return false;
            }
        }
        false
    }

    /// Primal simplex with Bland's rule. Returns false if unbounded.
    fn optimize(&mut self, mut costs: Vec<Vec<F>>) -> bool {
        loop {
            let Some(e) = (0..self.ncols).find(|&j| Self::lex_positive(&costs, j)) else {
                return true;
            };
            let mut best: Option<(usize, F)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = &row[e];
                if !a.is_positive() {
                    continue;
                }
                let ratio = row[self.ncols].clone() / a.clone();
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(r, e, &mut costs);
        }
    }

    fn pivot(&mut self, r: usize, e: usize, costs: &mut [Vec<F>]) {
        let inv = F::one() / self.rows[r][e].clone();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v = v.clone() * inv.clone();
            }
        }
        let prow = self.rows[r].clone();
        let nz: Vec<usize> = (0..prow.len()).filter(|&k| !prow[k].is_zero()).collect();
        let eliminate = |row: &mut Vec<F>| {
            let f = row[e].clone();
            if f.is_zero() {
                return;
            }
            for &k in &nz {
                row[k] = row[k].clone() - f.clone() * prow[k].clone();
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        for d in costs.iter_mut() {
            eliminate(d);
        }
        self.basis[r] = e;
    }

    fn solution(&self) -> Vec<F> {
        let mut value = vec![F::zero(); self.ncols];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            value[b] = row[self.ncols].clone();
        }
        self.var_cols
            .iter()
            .map(|&(p, n)| match n {
                Some(n) => value[p].clone() - value[n].clone(),
                None => value[p].clone(),
            })
            .collect()
    }
}

/// Optimizes `<objective, x>` over `p`, returning the lexicographically smallest
/// optimal vertex. An unbounded objective is an error: inputs are expected to be
/// bounded polytopes.
pub fn solve_lp<F: Scalar>(
    p: &HPolytope<F>,
    objective: &[F],
    sense: Sense,
) -> Result<LpOutcome<F>, KernelError> {
    if objective.len() != p.dim {
        return Err(KernelError::DimensionMismatch {
            expected: p.dim,
            found: objective.len(),
        });
    }
    let n = p.dim;
    let mut lp = LinearProgram::new(n);
    for h in &p.ineqs {
        lp.push(h.normal.clone(), RowKind::Le, h.rhs.clone());
    }
    let main: Vec<F> = match sense {
        Sense::Max => objective.to_vec(),
        Sense::Min => objective.iter().map(|c| -c.clone()).collect(),
    };
    let mut objectives = vec![main];
    for i in 0..n {
        let mut e = vec![F::zero(); n];
        e[i] = -F::one();
        objectives.push(e);
    }
    match lp.maximize_lex(&objectives) {
        LpStatus::Infeasible => Ok(LpOutcome::Infeasible),
        LpStatus::Unbounded => Err(KernelError::Unbounded),
        LpStatus::Optimal(point) => {
            let value = super::dot(objective, &point);
            Ok(LpOutcome::Optimal { point, value })
        }
    }
}
