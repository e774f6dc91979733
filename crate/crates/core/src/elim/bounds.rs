//! Bound classification, residue cases and permutation branches for the
//! interval-counting case.
//!
//! Row `i` of a Cramer solution `D·zᵢ = λ_{i,p}·x_p + Sᵢ` turns `zᵢ ≥ 0` into
//! a bound on `m·x_p`, where `m` is the lcm of the nonzero `λ_{i,p}` and
//! `ηᵢ = −m/λ_{i,p}`: an upper bound `ηᵢ·Sᵢ ≥ m·x_p` when `λ_{i,p} < 0`, a
//! lower bound `ηᵢ·Sᵢ ≤ m·x_p` when `λ_{i,p} > 0`, and the sign condition
//! `Sᵢ ≥ 0` when `λ_{i,p} = 0`.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ElimError;
use crate::formula::{Formula, FreshNames, Term};
use crate::linalg::{positive_lcm, CramerSolution};

/// Rows of a Cramer solution split by the sign of their last-column entry.
/// Indices are 0-based rows of the solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundClassification {
    /// The set A: `λ_{i,p} < 0`, `ηᵢ > 0`, giving upper bounds.
    pub upper: Vec<usize>,
    /// The set B: `λ_{i,p} > 0`, `ηᵢ < 0`, giving lower bounds.
    pub lower: Vec<usize>,
    /// The set E: `λ_{i,p} = 0`, giving sign conditions.
    pub sign: Vec<usize>,
    pub m: BigInt,
    pub eta: BTreeMap<usize, BigInt>,
    /// `Sᵢ = Σ_{j<p} λ_{i,j}·x_j + γᵢ`.
    pub s: Vec<Term>,
}

impl BoundClassification {
    /// `Uᵢ = ηᵢ·Sᵢ` for `i ∈ A`.
    pub fn upper_bound(&self, i: usize) -> Term {
        debug_assert!(self.upper.contains(&i));
        self.s[i].scale(&self.eta[&i])
    }

    /// `Lᵢ = ηᵢ·Sᵢ` for `i ∈ B`.
    pub fn lower_bound(&self, i: usize) -> Term {
        debug_assert!(self.lower.contains(&i));
        self.s[i].scale(&self.eta[&i])
    }

    /// `⋀_{i ∈ E} Sᵢ ≥ 0`.
    pub fn sign_conditions(&self) -> Formula {
        Formula::and(self.sign.iter().map(|&i| Formula::le(Term::zero(), self.s[i].clone())))
    }

    pub fn has_both_bounds(&self) -> bool {
        !self.upper.is_empty() && !self.lower.is_empty()
    }
}

/// Classifies the rows of `cs`, whose last column belongs to the counted
/// coordinate. `free` names the other `p − 1` columns.
pub fn classify_bounds(cs: &CramerSolution, free: &[String]) -> Result<BoundClassification, ElimError> {
    let p = cs.size();
    if free.len() + 1 != p {
        return Err(ElimError::Internal(format!(
            "{} free names for a {p}-dimensional solution",
            free.len()
        )));
    }
    let last: Vec<BigInt> = (0..p).map(|i| cs.lambda.get(i, p - 1).clone()).collect();
    let m = positive_lcm(&last)
        .map_err(|_| ElimError::Internal("counted column of an invertible system is zero".into()))?;
    let mut bc = BoundClassification {
        upper: Vec::new(),
        lower: Vec::new(),
        sign: Vec::new(),
        m: m.clone(),
        eta: BTreeMap::new(),
        s: Vec::with_capacity(p),
    };
    for (i, lam) in last.iter().enumerate() {
        let parts = free.iter().enumerate().map(|(j, v)| (cs.lambda.get(i, j).clone(), v.clone()));
        bc.s.push(Term::from_parts(cs.gamma[i].clone(), parts));
        if lam.is_zero() {
            bc.sign.push(i);
            continue;
        }
        let eta = -(&m / lam);
        debug_assert_eq!(-lam * &eta, m);
        if eta.is_positive() {
            bc.upper.push(i);
        } else {
            bc.lower.push(i);
        }
        bc.eta.insert(i, eta);
    }
    Ok(bc)
}

/// Residues `f(1), …, f(p−1)` of the free coordinates and `a` of the counted
/// one, all modulo `D`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResidueCase {
    pub f: Vec<BigInt>,
    pub a: BigInt,
}

impl ResidueCase {
    /// `⋀_k x_k ≡ f(k) (mod D)` over the free coordinates; `true` when `D = 1`.
    pub fn guard(&self, free: &[String], d: &BigInt) -> Formula {
        if d.is_one() {
            return Formula::True;
        }
        Formula::and(
            free.iter()
                .zip(&self.f)
                .map(|(v, r)| Formula::cong(Term::var(v), r.clone(), d.clone())),
        )
    }
}

/// All `D^p` cases in lexicographic order of `(f(1), …, f(p−1), a)`.
pub fn residue_cases(d: &BigInt, p: usize) -> impl Iterator<Item = ResidueCase> {
    assert!(d.is_positive() && p >= 1);
    let d = d.clone();
    let mut digits: Option<Vec<BigInt>> = Some(vec![BigInt::zero(); p]);
    std::iter::from_fn(move || {
        let current = digits.take()?;
        let mut next = current.clone();
        let mut k = p;
        let mut carried_out = true;
        while k > 0 {
            k -= 1;
            next[k] += 1;
            if next[k] < d {
                carried_out = false;
                break;
            }
            next[k] = BigInt::zero();
        }
        if !carried_out {
            digits = Some(next);
        }
        let mut f = current;
        let a = f.pop().expect("p >= 1");
        Some(ResidueCase { f, a })
    })
}

pub fn build_residue_cases(d: &BigInt, p: usize) -> Vec<ResidueCase> {
    residue_cases(d, p).collect()
}

/// All `zᵢ` are integers on the residue class: `λ_{i,p}·a + Σ_j λ_{i,j}·f(j) + γᵢ ≡ 0 (mod D)`.
pub fn residue_case_feasible(cs: &CramerSolution, rc: &ResidueCase) -> bool {
    let p = cs.size();
    (0..p).all(|i| {
        let mut acc = cs.gamma[i].clone() + cs.lambda.get(i, p - 1) * &rc.a;
        for (j, fj) in rc.f.iter().enumerate() {
            acc += cs.lambda.get(i, j) * fj;
        }
        acc.is_multiple_of(&cs.denom)
    })
}

/// Cases with more than this many members are refused.
pub const MAX_RESIDUE_CASES: u64 = 50_000_000;

/// Feasible free-coordinate residues `f`, grouped by the counted residue `a`
/// (index `a` of the result). Equivalent to filtering [`residue_cases`] with
/// [`residue_case_feasible`], computed in machine integers.
pub fn feasible_cases_by_residue(cs: &CramerSolution) -> Result<Vec<Vec<Vec<BigInt>>>, ElimError> {
    let p = cs.size();
    let total = cs
        .denom
        .to_u64()
        .and_then(|d| d.checked_pow(p as u32))
        .filter(|&t| t <= MAX_RESIDUE_CASES)
        .ok_or_else(|| {
            ElimError::TooLarge(format!("{}^{p} residue cases exceed the limit of {MAX_RESIDUE_CASES}", cs.denom))
        })?;
    let d = cs.denom.to_i64().expect("bounded above");
    let red = |v: &BigInt| v.mod_floor(&cs.denom).to_i64().expect("reduced below D");
    let lam: Vec<Vec<i64>> = (0..p).map(|i| (0..p).map(|j| red(cs.lambda.get(i, j))).collect()).collect();
    let gam: Vec<i64> = (0..p).map(|i| red(&cs.gamma[i])).collect();
    let mut out = vec![Vec::new(); d as usize];
    let mut digits = vec![0i64; p];
    for _ in 0..total {
        let ok = (0..p).all(|i| {
            let s: i128 = gam[i] as i128 + (0..p).map(|j| lam[i][j] as i128 * digits[j] as i128).sum::<i128>();
            s % d as i128 == 0
        });
        if ok {
            let a = digits[p - 1] as usize;
            out[a].push(digits[..p - 1].iter().map(|&v| BigInt::from(v)).collect());
        }
        for k in (0..p).rev() {
            digits[k] += 1;
            if digits[k] < d {
                break;
            }
            digits[k] = 0;
        }
    }
    Ok(out)
}

/// One ordering of the upper bounds (`sigma`) and of the lower bounds (`tau`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationBranch {
    /// `σ(1), …, σ(r)`: `U_{σ(1)}` is the least upper bound.
    pub sigma: Vec<usize>,
    /// `τ(1), …, τ(s)`: `L_{τ(1)}` is the greatest lower bound.
    pub tau: Vec<usize>,
    /// `L_{τ(s)} ≺ ⋯ ≺ L_{τ(1)}`.
    pub lower_chain: Formula,
    /// `U_{σ(1)} ≺ ⋯ ≺ U_{σ(r)}`.
    pub upper_chain: Formula,
    /// Count variable of this branch.
    pub u: String,
}

impl PermutationBranch {
    pub fn chain_guard(&self) -> Formula {
        Formula::and([self.lower_chain.clone(), self.upper_chain.clone()])
    }
}

/// `(p, i) ≺ (q, j)` in the lexicographic order on (value, index).
fn lex_less(p: Term, i: usize, q: Term, j: usize) -> Formula {
    if i < j {
        Formula::le(p, q)
    } else {
        Formula::lt(p, q)
    }
}

/// All `|A|!·|B|!` branches, σ-major, each order enumerated lexicographically.
/// Ties between equal bounds are broken by row index, so for any values
/// exactly one branch's chains hold.
pub fn build_permutation_branches(
    bc: &BoundClassification,
    fresh: &mut FreshNames,
) -> Result<Vec<PermutationBranch>, ElimError> {
    if !bc.has_both_bounds() {
        return Err(ElimError::UnboundedCount);
    }
    let mut out = Vec::new();
    for sigma in bc.upper.iter().copied().permutations(bc.upper.len()) {
        for tau in bc.lower.iter().copied().permutations(bc.lower.len()) {
            let upper_chain = Formula::and(
                sigma
                    .windows(2)
                    .map(|w| lex_less(bc.upper_bound(w[0]), w[0], bc.upper_bound(w[1]), w[1])),
            );
            let lower_chain = Formula::and(
                tau.windows(2)
                    .map(|w| lex_less(bc.lower_bound(w[1]), w[1], bc.lower_bound(w[0]), w[0])),
            );
            out.push(PermutationBranch {
                sigma: sigma.clone(),
                tau,
                lower_chain,
                upper_chain,
                u: fresh.fresh("u"),
            });
        }
    }
    Ok(out)
}
