//! Linear and semilinear set presentations over ℤⁿ and ℕⁿ.
//!
//! A linear set is `base + ℕ·p₁ + … + ℕ·p_k`; it is simple when the periods
//! are linearly independent over ℚ, in which case every member has exactly
//! one coefficient vector. Membership, enumeration and disjointness checks are
//! only offered for simple sets.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::formula::{Formula, Term};
use crate::linalg::{self, IntMatrix, IntVector};

/// Which structure the variables range over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DomainTag {
    Z,
    N,
}

impl DomainTag {
    pub fn contains(self, v: &BigInt) -> bool {
        match self {
            DomainTag::Z => true,
            DomainTag::N => !v.is_negative(),
        }
    }
}

impl fmt::Display for DomainTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainTag::Z => write!(f, "Z"),
            DomainTag::N => write!(f, "N"),
        }
    }
}

impl std::str::FromStr for DomainTag {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "Z" | "z" => Ok(DomainTag::Z),
            "N" | "n" => Ok(DomainTag::N),
            other => Err(format!("unknown domain `{other}` (expected Z or N)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetsError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("negative entry {value} in a presentation over N")]
    NegativeInN { value: BigInt },
    #[error("linear set is not simple: its periods are linearly dependent")]
    NotSimple,
    #[error("semilinear presentation has no components")]
    Empty,
    #[error("components disagree on {0}")]
    Heterogeneous(&'static str),
    #[error("invalid box: {0}")]
    InvalidBox(String),
}

/// `base + ℕ·periods[0] + … + ℕ·periods[p-1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearSetPresentation {
    base: IntVector,
    periods: Vec<IntVector>,
    domain: DomainTag,
}

impl LinearSetPresentation {
    pub fn new(base: IntVector, periods: Vec<IntVector>, domain: DomainTag) -> Result<Self, SetsError> {
        let n = base.len();
        if n == 0 {
            return Err(SetsError::Dimension("dimension must be at least 1".into()));
        }
        if let Some(bad) = periods.iter().find(|p| p.len() != n) {
            return Err(SetsError::Dimension(format!(
                "period of length {} in dimension {n}",
                bad.len()
            )));
        }
        if domain == DomainTag::N {
            if let Some(v) = std::iter::once(&base)
                .chain(periods.iter())
                .flat_map(|v| v.iter())
                .find(|v| v.is_negative())
            {
                return Err(SetsError::NegativeInN { value: v.clone() });
            }
        }
        Ok(LinearSetPresentation { base, periods, domain })
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    pub fn base(&self) -> &IntVector {
        &self.base
    }

    pub fn periods(&self) -> &[IntVector] {
        &self.periods
    }

    pub fn domain(&self) -> DomainTag {
        self.domain
    }

    /// The `n × p` matrix whose columns are the periods, or `None` when `p = 0`.
    pub fn period_matrix(&self) -> Option<IntMatrix> {
        if self.periods.is_empty() {
            None
        } else {
            Some(IntMatrix::from_columns(&self.periods).expect("periods share the dimension"))
        }
    }

    /// Reorders coordinates: coordinate `i` of the result is coordinate `order[i]` of `self`.
    pub fn permute_coordinates(&self, order: &[usize]) -> Self {
        let pick = |v: &IntVector| order.iter().map(|&i| v[i].clone()).collect::<IntVector>();
        LinearSetPresentation {
            base: pick(&self.base),
            periods: self.periods.iter().map(pick).collect(),
            domain: self.domain,
        }
    }

    /// The point `base + Σ coeffs[i]·periods[i]`.
    pub fn point(&self, coeffs: &[BigInt]) -> IntVector {
        assert_eq!(coeffs.len(), self.periods.len());
        (0..self.dim())
            .map(|j| {
                let mut v = self.base[j].clone();
                for (c, p) in coeffs.iter().zip(&self.periods) {
                    v += c * &p[j];
                }
                v
            })
            .collect()
    }
}

/// A finite union of linear sets sharing dimension and domain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SemilinearPresentation {
    components: Vec<LinearSetPresentation>,
    pub asserted_disjoint: bool,
    pub asserted_simple: bool,
}

impl SemilinearPresentation {
    pub fn new(
        components: Vec<LinearSetPresentation>,
        asserted_disjoint: bool,
        asserted_simple: bool,
    ) -> Result<Self, SetsError> {
        let first = components.first().ok_or(SetsError::Empty)?;
        if components.iter().any(|c| c.dim() != first.dim()) {
            return Err(SetsError::Heterogeneous("dimension"));
        }
        if components.iter().any(|c| c.domain() != first.domain()) {
            return Err(SetsError::Heterogeneous("domain"));
        }
        Ok(SemilinearPresentation {
            components,
            asserted_disjoint,
            asserted_simple,
        })
    }

    pub fn components(&self) -> &[LinearSetPresentation] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components[0].dim()
    }

    pub fn domain(&self) -> DomainTag {
        self.components[0].domain()
    }

    pub fn contains(&self, x: &IntVector) -> Result<bool, SetsError> {
        for c in &self.components {
            if membership(c, x)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Inclusive per-coordinate bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntBox {
    lower: Vec<BigInt>,
    upper: Vec<BigInt>,
}

impl IntBox {
    pub fn new(lower: Vec<BigInt>, upper: Vec<BigInt>) -> Result<Self, SetsError> {
        if lower.len() != upper.len() {
            return Err(SetsError::InvalidBox("bound vectors of different length".into()));
        }
        if let Some(i) = (0..lower.len()).find(|&i| lower[i] > upper[i]) {
            return Err(SetsError::InvalidBox(format!(
                "coordinate {i}: lower {} exceeds upper {}",
                lower[i], upper[i]
            )));
        }
        Ok(IntBox { lower, upper })
    }

    /// `[lo, hi]ⁿ`.
    pub fn cube(dim: usize, lo: i64, hi: i64) -> Result<Self, SetsError> {
        Self::new(vec![BigInt::from(lo); dim], vec![BigInt::from(hi); dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn contains(&self, x: &IntVector) -> bool {
        x.len() == self.dim() && (0..self.dim()).all(|i| self.lower[i] <= x[i] && x[i] <= self.upper[i])
    }

    /// All points in lexicographic order.
    pub fn points(&self) -> BoxPoints<'_> {
        BoxPoints {
            bounds: self,
            next: Some(self.lower.clone()),
        }
    }
}

pub struct BoxPoints<'a> {
    bounds: &'a IntBox,
    next: Option<Vec<BigInt>>,
}

impl Iterator for BoxPoints<'_> {
    type Item = IntVector;

    fn next(&mut self) -> Option<IntVector> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.len();
        let mut advanced = false;
        while i > 0 {
            i -= 1;
            if succ[i] < self.bounds.upper[i] {
                succ[i] += 1;
                advanced = true;
                break;
            }
            succ[i] = self.bounds.lower[i].clone();
        }
        if advanced {
            self.next = Some(succ);
        }
        Some(IntVector(current))
    }
}

/// Whether the periods are linearly independent over ℚ.
pub fn check_simple(l: &LinearSetPresentation) -> bool {
    match l.period_matrix() {
        None => true,
        Some(m) => linalg::rank_over_rationals(&m) == l.periods.len(),
    }
}

/// Exact membership test for simple linear sets.
///
/// Solves a full-rank square subsystem for the (unique) coefficient vector and
/// then checks it is a nonnegative integer vector satisfying the other rows.
pub fn membership(l: &LinearSetPresentation, x: &IntVector) -> Result<bool, SetsError> {
    if x.len() != l.dim() {
        return Err(SetsError::Dimension(format!(
            "point of dimension {} against a set of dimension {}",
            x.len(),
            l.dim()
        )));
    }
    let Some(m) = l.period_matrix() else {
        return Ok(x == &l.base);
    };
    let Some(sel) = linalg::find_full_rank_submatrix(&m, None) else {
        return Err(SetsError::NotSimple);
    };
    let rows = sel.indices();
    let sub = m.select_rows(rows).expect("valid selection");
    let offset: IntVector = rows.iter().map(|&i| l.base[i].clone()).collect();
    let cs = linalg::cramer_solve(&sub, &offset).expect("full-rank selection is invertible");
    let x_sel: IntVector = rows.iter().map(|&i| x[i].clone()).collect();
    let scaled = cs.lambda.mul_vec(&x_sel).expect("sizes agree");
    let mut z = Vec::with_capacity(rows.len());
    for (s, g) in scaled.iter().zip(cs.gamma.iter()) {
        let num = s + g;
        let (q, r) = num.div_rem(&cs.denom);
        if !r.is_zero() || q.is_negative() {
            return Ok(false);
        }
        z.push(q);
    }
    Ok(&l.point(&z) == x)
}

/// The points of the union inside the box, each once, in lexicographic order.
pub fn enumerate_in_box(s: &SemilinearPresentation, bounds: &IntBox) -> Result<Vec<IntVector>, SetsError> {
    if bounds.dim() != s.dim() {
        return Err(SetsError::Dimension("box and presentation dimensions differ".into()));
    }
    for c in s.components() {
        if !check_simple(c) {
            return Err(SetsError::NotSimple);
        }
    }
    let mut out = Vec::new();
    for x in bounds.points() {
        if s.contains(&x)? {
            out.push(x);
        }
    }
    Ok(out)
}

/// True iff no box point lies in two distinct components. Bounded check only:
/// a `true` answer says nothing about points outside the box.
pub fn check_disjoint_in_box(s: &SemilinearPresentation, bounds: &IntBox) -> Result<bool, SetsError> {
    if bounds.dim() != s.dim() {
        return Err(SetsError::Dimension("box and presentation dimensions differ".into()));
    }
    if s.components().iter().any(|c| !check_simple(c)) {
        return Err(SetsError::NotSimple);
    }
    if s.components().len() < 2 {
        return Ok(true);
    }
    for x in bounds.points() {
        let mut hits = 0;
        for c in s.components() {
            if membership(c, &x)? {
                hits += 1;
                if hits > 1 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Default coordinate names `x1, …, xn`.
pub fn default_coordinate_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// `∃z₁…∃z_p (⋀ zᵢ ≥ 0 ∧ ⋀ⱼ xⱼ = aⱼ + Σᵢ b_{j,i} zᵢ)` over the coordinates `x1..xn`.
pub fn formula_of(l: &LinearSetPresentation) -> Formula {
    formula_of_named(l, &default_coordinate_names(l.dim()))
}

/// As [`formula_of`], with explicit coordinate names. Bound variables are
/// `z1, z2, …`, skipping any name already used by a coordinate.
pub fn formula_of_named(l: &LinearSetPresentation, coords: &[String]) -> Formula {
    assert_eq!(coords.len(), l.dim(), "one name per coordinate");
    let mut bound = Vec::with_capacity(l.periods.len());
    let mut k = 1;
    while bound.len() < l.periods.len() {
        let name = format!("z{k}");
        if !coords.contains(&name) {
            bound.push(name);
        }
        k += 1;
    }
    let mut conjuncts: Vec<Formula> = bound
        .iter()
        .map(|z| Formula::le(Term::zero(), Term::var(z)))
        .collect();
    for (j, x) in coords.iter().enumerate() {
        let mut rhs = Term::constant(l.base[j].clone());
        for (z, p) in bound.iter().zip(&l.periods) {
            rhs = rhs.add(&Term::monomial(p[j].clone(), z));
        }
        conjuncts.push(Formula::eq(Term::var(x), rhs));
    }
    let body = Formula::and(conjuncts);
    bound
        .into_iter()
        .rev()
        .fold(body, |acc, z| Formula::exists(z, acc))
}
