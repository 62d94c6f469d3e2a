//! Disjunctions, integrality patterns and disjunction families.
//!
//! A disjunction is a finite union of polyhedral pieces that covers every point
//! of the mixed-integer lattice. Labels are 1-based (`var(i=1,K=0)` speaks of
//! the first coordinate) while the Rust API indexes coordinates from zero.

use std::fmt;

use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use crate::kernel::{remove_redundant, HPolytope, KernelError, LinearInequality};
use crate::scalar::Scalar;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DisjunctionError {
    #[error("coordinate {0} is out of range for dimension {1}")]
    OutOfRange(usize, usize),
    #[error("coordinate {0} is continuous in the integrality pattern")]
    ContinuousCoordinate(usize),
    #[error("split coefficient {0} is not an integer")]
    NonIntegral(String),
    #[error("split vector is zero")]
    ZeroSplit,
    #[error("split vector has length {found}, expected {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("disjunction needs at least one piece")]
    NoPieces,
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Which coordinates are constrained to be integral.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegralityPattern {
    pub mask: Vec<bool>,
}

impl IntegralityPattern {
    pub fn all_integral(n: usize) -> Self {
        Self { mask: vec![true; n] }
    }

    pub fn dim(&self) -> usize {
        self.mask.len()
    }

    pub fn is_integral(&self, i: usize) -> bool {
        self.mask.get(i).copied().unwrap_or(false)
    }

    pub fn integral_coords(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn is_pure_continuous(&self) -> bool {
        !self.mask.iter().any(|&b| b)
    }

    /// Whether `x` is integral on every integral coordinate.
    pub fn admits<F: Scalar>(&self, x: &[F]) -> bool {
        self.integral_coords().all(|i| x[i].is_integral())
    }
}

/// A finite union of polyhedral pieces with a canonical text label.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Disjunction<F = Rational> {
    pub dim: usize,
    pub pieces: Vec<HPolytope<F>>,
    pub label: String,
}

/// The two recognised structured shapes of a two-piece disjunction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Structure<F> {
    /// `x_i <= K` or `x_i >= K + 1`.
    Variable { i: usize, k: F },
    /// `<pi, x> <= pi0` or `<pi, x> >= pi0 + 1`.
    Split { pi: Vec<F>, pi0: F },
}

impl<F: Scalar> Disjunction<F> {
    pub fn new(dim: usize, pieces: Vec<HPolytope<F>>, label: impl Into<String>) -> Result<Self, DisjunctionError> {
        if pieces.is_empty() {
            return Err(DisjunctionError::NoPieces);
        }
        for p in &pieces {
            if p.dim != dim {
                return Err(KernelError::DimensionMismatch {
                    expected: dim,
                    found: p.dim,
                }
                .into());
            }
        }
        Ok(Self {
            dim,
            pieces,
            label: label.into(),
        })
    }

    /// `x` lies in at least one piece.
    pub fn contains(&self, x: &[F]) -> bool {
        self.pieces.iter().any(|p| p.contains(x))
    }

    /// Recognises a split (or variable) disjunction written in canonical form:
    /// two one-inequality pieces `<pi,x> <= pi0` and `-<pi,x> <= -(pi0+1)` with
    /// integer `pi`, `pi0`.
    pub fn structure(&self) -> Option<Structure<F>> {
        let [a, b] = self.pieces.as_slice() else {
            return None;
        };
        let ([lo], [hi]) = (a.ineqs.as_slice(), b.ineqs.as_slice()) else {
            return None;
        };
        if lo.has_zero_normal() || !lo.rhs.is_integral() || !lo.normal.iter().all(Scalar::is_integral) {
            return None;
        }
        let expected = LinearInequality::new(lo.normal.clone(), lo.rhs.clone() + F::one()).reversed();
        if *hi != expected {
            return None;
        }
        let nonzero: Vec<usize> = (0..self.dim).filter(|&j| !lo.normal[j].is_zero()).collect();
        if nonzero.len() == 1 && lo.normal[nonzero[0]].is_one() {
            return Some(Structure::Variable {
                i: nonzero[0],
                k: lo.rhs.clone(),
            });
        }
        Some(Structure::Split {
            pi: lo.normal.clone(),
            pi0: lo.rhs.clone(),
        })
    }

    /// Whether the label is exactly what the structured constructors would
    /// produce for these pieces.
    pub fn has_canonical_label(&self) -> bool {
        match self.structure() {
            Some(Structure::Variable { i, k }) => self.label == variable_label(i, &k),
            Some(Structure::Split { pi, pi0 }) => self.label == split_label(&pi, &pi0),
            None => false,
        }
    }

    /// Every structured (split or variable) disjunction with no integrality
    /// requirement on continuous coordinates is valid for the lattice.
    pub fn is_structurally_valid(&self, pattern: &IntegralityPattern) -> bool {
        match self.structure() {
            Some(Structure::Variable { i, .. }) => pattern.is_integral(i),
            Some(Structure::Split { pi, .. }) => pi
                .iter()
                .enumerate()
                .all(|(j, v)| v.is_zero() || pattern.is_integral(j)),
            None => false,
        }
    }
}

impl<F: Scalar> fmt::Display for Disjunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

fn variable_label<F: Scalar>(i: usize, k: &F) -> String {
    format!("var(i={},K={})", i + 1, k)
}

fn split_label<F: Scalar>(pi: &[F], pi0: &F) -> String {
    let pi: Vec<String> = pi.iter().map(|v| v.to_string()).collect();
    format!("split(pi=[{}],pi0={})", pi.join(","), pi0)
}

fn two_sided<F: Scalar>(normal: Vec<F>, pi0: F) -> Vec<HPolytope<F>> {
    let n = normal.len();
    let lo = LinearInequality::new(normal.clone(), pi0.clone());
    let hi = LinearInequality::new(normal, pi0 + F::one()).reversed();
    vec![
        HPolytope { dim: n, ineqs: vec![lo] },
        HPolytope { dim: n, ineqs: vec![hi] },
    ]
}

/// `D_{i,K}`: `x_i <= K` or `x_i >= K + 1`. `i` is 0-based; `k` must be integral.
pub fn variable_disjunction<F: Scalar>(
    i: usize,
    k: F,
    pattern: &IntegralityPattern,
) -> Result<Disjunction<F>, DisjunctionError> {
    let n = pattern.dim();
    if i >= n {
        return Err(DisjunctionError::OutOfRange(i, n));
    }
    if !pattern.is_integral(i) {
        return Err(DisjunctionError::ContinuousCoordinate(i));
    }
    if !k.is_integral() {
        return Err(DisjunctionError::NonIntegral(k.to_string()));
    }
    let mut e = vec![F::zero(); n];
    e[i] = F::one();
    let label = variable_label(i, &k);
    Ok(Disjunction {
        dim: n,
        pieces: two_sided(e, k),
        label,
    })
}

/// Shorthand for [`variable_disjunction`] on an all-integral lattice.
pub fn var<F: Scalar>(i: usize, k: i64, n: usize) -> Disjunction<F> {
    variable_disjunction(i, F::int(k), &IntegralityPattern::all_integral(n))
        .expect("coordinate within range")
}

/// `<pi, x> <= pi0` or `<pi, x> >= pi0 + 1` for integer `pi`, `pi0`.
pub fn split_disjunction<F: Scalar>(
    pi: &[F],
    pi0: F,
    pattern: &IntegralityPattern,
) -> Result<Disjunction<F>, DisjunctionError> {
    let n = pattern.dim();
    if pi.len() != n {
        return Err(DisjunctionError::WrongLength {
            expected: n,
            found: pi.len(),
        });
    }
    for (j, v) in pi.iter().chain(std::iter::once(&pi0)).enumerate() {
        if !v.is_integral() {
            return Err(DisjunctionError::NonIntegral(v.to_string()));
        }
        if j < n && !v.is_zero() && !pattern.is_integral(j) {
            return Err(DisjunctionError::ContinuousCoordinate(j));
        }
    }
    if pi.iter().all(Zero::is_zero) {
        return Err(DisjunctionError::ZeroSplit);
    }
    let nonzero: Vec<usize> = (0..n).filter(|&j| !pi[j].is_zero()).collect();
    if nonzero.len() == 1 && pi[nonzero[0]].is_one() {
        return variable_disjunction(nonzero[0], pi0, pattern);
    }
    let label = split_label(pi, &pi0);
    Ok(Disjunction {
        dim: n,
        pieces: two_sided(pi.to_vec(), pi0),
        label,
    })
}

/// Total number of irredundant facets over all pieces.
pub fn complexity<F: Scalar>(d: &Disjunction<F>) -> Result<usize, KernelError> {
    let mut total = 0;
    for p in &d.pieces {
        total += remove_redundant(p)?.ineqs.len();
    }
    Ok(total)
}

/// A finite box `lo <= x <= hi` used to check lattice coverage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBox<F = Rational> {
    pub lo: Vec<F>,
    pub hi: Vec<F>,
}

impl<F: Scalar> LatticeBox<F> {
    pub fn new(lo: Vec<F>, hi: Vec<F>) -> Self {
        assert_eq!(lo.len(), hi.len());
        Self { lo, hi }
    }

    pub fn cube(n: usize, lo: i64, hi: i64) -> Self {
        Self::new(vec![F::int(lo); n], vec![F::int(hi); n])
    }

    /// The integer points of the box on the integral coordinates, with the
    /// continuous coordinates set to their lower bound. Coordinates are visited
    /// in lexicographic order.
    pub fn lattice_points(&self, pattern: &IntegralityPattern) -> Vec<Vec<F>> {
        let n = self.lo.len();
        let ranges: Vec<(F, F)> = (0..n)
            .map(|i| {
                if pattern.is_integral(i) {
                    (Scalar::ceil(&self.lo[i]), Scalar::floor(&self.hi[i]))
                } else {
                    (self.lo[i].clone(), self.lo[i].clone())
                }
            })
            .collect();
        if ranges.iter().any(|(a, b)| a > b) {
            return vec![];
        }
        let mut out = Vec::new();
        let mut cur: Vec<F> = ranges.iter().map(|(a, _)| a.clone()).collect();
        loop {
            out.push(cur.clone());
            let mut j = n;
            loop {
                if j == 0 {
                    return out;
                }
                j -= 1;
                if pattern.is_integral(j) && cur[j] < ranges[j].1 {
                    cur[j] = cur[j].clone() + F::one();
                    break;
                }
                cur[j] = ranges[j].0.clone();
            }
        }
    }
}

/// Whether every lattice point of the box lies in some piece.
///
/// On continuous coordinates the check is conservative: for each integer
/// assignment of the integral coordinates, the whole continuous slice of the
/// box must fit inside a single piece.
pub fn check_validity<F: Scalar>(
    d: &Disjunction<F>,
    pattern: &IntegralityPattern,
    bx: &LatticeBox<F>,
) -> Result<bool, KernelError> {
    let continuous: Vec<usize> = (0..d.dim).filter(|&i| !pattern.is_integral(i)).collect();
    for point in bx.lattice_points(pattern) {
        if continuous.is_empty() {
            if !d.contains(&point) {
                return Ok(false);
            }
            continue;
        }
        let mut lo = point.clone();
        let mut hi = point;
        for &j in &continuous {
            lo[j] = bx.lo[j].clone();
            hi[j] = bx.hi[j].clone();
        }
        let slice = HPolytope::box_from(&lo, &hi);
        let mut covered = false;
        for piece in &d.pieces {
            let mut inside = true;
            for h in &piece.ineqs {
                if !slice.implies(h)? {
                    inside = false;
                    break;
                }
            }
            if inside {
                covered = true;
                break;
            }
        }
        if !covered {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyKind<F = Rational> {
    /// All variable disjunctions `D_{i,K}` on integral coordinates.
    Variable,
    /// Split disjunctions with primitive `pi`, `|pi|_inf <= W`, first nonzero entry positive.
    SplitBounded(u32),
    /// A user-supplied finite list.
    ExplicitList(Vec<Disjunction<F>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjunctionFamily<F = Rational> {
    pub kind: FamilyKind<F>,
    pub pattern: IntegralityPattern,
}

impl<F: Scalar> DisjunctionFamily<F> {
    pub fn variable(pattern: IntegralityPattern) -> Self {
        Self {
            kind: FamilyKind::Variable,
            pattern,
        }
    }

    pub fn split(w: u32, pattern: IntegralityPattern) -> Self {
        Self {
            kind: FamilyKind::SplitBounded(w),
            pattern,
        }
    }

    pub fn explicit(list: Vec<Disjunction<F>>, pattern: IntegralityPattern) -> Self {
        Self {
            kind: FamilyKind::ExplicitList(list),
            pattern,
        }
    }

    pub fn name(&self) -> String {
        match &self.kind {
            FamilyKind::Variable => "variable".into(),
            FamilyKind::SplitBounded(w) => format!("split:{w}"),
            FamilyKind::ExplicitList(l) => format!("explicit:{}", l.len()),
        }
    }

    /// Integer vectors `pi` of the bounded split family, lexicographically
    /// ordered over `[-W, W]^n` on the integral coordinates.
    pub fn split_normals(&self) -> Vec<Vec<F>> {
        let FamilyKind::SplitBounded(w) = self.kind else {
            return vec![];
        };
        split_normals(&self.pattern, w)
    }

    /// Family members `D` with `x` not in `D`, in canonical order.
    pub fn candidates<'a>(&'a self, x: &'a [F]) -> Box<dyn Iterator<Item = Disjunction<F>> + 'a> {
        candidate_disjunctions(self, x)
    }
}

fn split_normals<F: Scalar>(pattern: &IntegralityPattern, w: u32) -> Vec<Vec<F>> {
    let n = pattern.dim();
    let w = i64::from(w);
    let coords: Vec<usize> = pattern.integral_coords().collect();
    let mut out = Vec::new();
    let mut cur = vec![-w; coords.len()];
    if coords.is_empty() || w == 0 {
        return out;
    }
    loop {
        let first = cur.iter().find(|&&v| v != 0);
        let gcd = cur.iter().fold(0i64, |g, v| g.gcd(v));
        if matches!(first, Some(&v) if v > 0) && gcd == 1 {
            let mut pi = vec![F::zero(); n];
            for (&c, &v) in coords.iter().zip(&cur) {
                pi[c] = F::int(v);
            }
            out.push(pi);
        }
        let mut j = cur.len();
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            if cur[j] < w {
                cur[j] += 1;
                break;
            }
            cur[j] = -w;
        }
    }
}

/// The members of `family` not containing `x`, in canonical order: variable
/// disjunctions by coordinate with `K = floor(x_i)`; splits lexicographically
/// in `pi` with `pi0 = floor(<pi, x>)`; explicit lists in list order.
pub fn candidate_disjunctions<'a, F: Scalar>(
    family: &'a DisjunctionFamily<F>,
    x: &'a [F],
) -> Box<dyn Iterator<Item = Disjunction<F>> + 'a> {
    let pattern = &family.pattern;
    match &family.kind {
        FamilyKind::Variable => Box::new(pattern.integral_coords().filter(|&i| !x[i].is_integral()).map(|i| variable_disjunction(i, Scalar::floor(&x[i]), pattern).expect("integral coordinate"))),
        FamilyKind::SplitBounded(w) => Box::new(split_normals::<F>(pattern, *w).into_iter().filter_map(
            move |pi| {
                let v = crate::kernel::dot(&pi, x);
                (!v.is_integral())
                    .then(|| split_disjunction(&pi, Scalar::floor(&v), pattern).expect("integral split"))
            },
        )),
        FamilyKind::ExplicitList(list) => Box::new(list.iter().filter(move |d| !d.contains(x)).cloned()),
    }
}

/// Range of `K` for which `D_{i,K}` can change a region whose `i`-th
/// coordinate spans `[lo, hi]`. Outside it one piece misses the region and
/// the other contains it entirely.
pub fn relevant_k_range<F: Scalar>(lo: &F, hi: &F) -> Option<(F, F)> {
    let a = Scalar::floor(lo);
    let b = Scalar::ceil(hi) - F::one();
    (a <= b).then_some((a, b))
}
