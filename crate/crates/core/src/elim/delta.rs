//! Counting the multiples of `m` in an interval that lie in one residue class.
//!
//! For `M = m·D` and `r = m·a`, the `x` with `y ≤ m·x ≤ z` and `x ≡ a (mod D)`
//! correspond to the `t = m·x` in `[y, z]` with `t ≡ r (mod M)`, of which
//! there are `⌊(z − r)/M⌋ − ⌊(y − 1 − r)/M⌋` when `y ≤ z + 1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::natural::normalize_for_n;
use super::ElimError;
use crate::formula::{Formula, FreshNames, Term};

/// `|{t ∈ [y, z] : t ≡ r (mod M)}|`. Panics when `M < 1`.
pub fn count_in_progression(y: &BigInt, z: &BigInt, r: &BigInt, modulus: &BigInt) -> BigInt {
    assert!(modulus.is_positive(), "modulus must be positive");
    if z < y {
        return BigInt::zero();
    }
    let r = r.mod_floor(modulus);
    (z - &r).div_floor(modulus) - (y - BigInt::one() - &r).div_floor(modulus)
}

/// How the floor quotients inside a counting formula are expressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeltaEncoding {
    /// Case split on the residues of both endpoints modulo `m·D`; one linear
    /// equation in `u` per pair of residues. Quantifier-free, `O((m·D)²)` atoms.
    #[default]
    ResidueSplit,
    /// `u = q₁ − q₂` with each `qᵢ` an existentially bound floor quotient.
    /// Constant size, two quantifiers.
    Quotient,
}

/// Parameters `m ≥ 1`, `D ≥ 1`, `0 ≤ a < D` of a counting formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaParams {
    pub m: BigInt,
    pub a: BigInt,
    pub d: BigInt,
}

impl DeltaParams {
    pub fn new(m: impl Into<BigInt>, a: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<Self, ElimError> {
        let (m, a, d) = (m.into(), a.into(), d.into());
        if !m.is_positive() {
            return Err(ElimError::Parameter(format!("m = {m} must be positive")));
        }
        if !d.is_positive() {
            return Err(ElimError::Parameter(format!("D = {d} must be positive")));
        }
        if a.is_negative() || a >= d {
            return Err(ElimError::Parameter(format!("residue a = {a} must lie in [0, {d})")));
        }
        Ok(DeltaParams { m, a, d })
    }

    /// `m·D`.
    pub fn modulus(&self) -> BigInt {
        &self.m * &self.d
    }

    /// `m·a`, the residue of `m·x` modulo `m·D`.
    pub fn residue(&self) -> BigInt {
        &self.m * &self.a
    }
}

fn cong(t: &Term, r: &BigInt, modulus: &BigInt) -> Formula {
    Formula::cong(t.clone(), r.clone(), modulus.clone())
}

/// `u` equals the number of `t ∈ [y, z]` with `t ≡ r (mod M)`.
///
/// With `shift`, the quotient encoding offsets both quotients by one so they
/// stay nonnegative whenever `y, z ≥ 0`.
fn delta_core(
    params: &DeltaParams,
    y: &Term,
    z: &Term,
    u: &str,
    encoding: DeltaEncoding,
    shift: bool,
    fresh: &mut FreshNames,
) -> Formula {
    let modulus = params.modulus();
    let r = params.residue();
    let ut = Term::var(u);
    let empty = Formula::and([Formula::lt(z.clone(), y.clone()), Formula::eq(ut.clone(), Term::zero())]);
    match encoding {
        DeltaEncoding::ResidueSplit => {
            let single = if modulus.is_one() {
                Formula::and([Formula::eq(y.clone(), z.clone()), Formula::eq(ut.clone(), Term::constant(1))])
            } else {
                let hit = cong(y, &r, &modulus);
                Formula::and([
                    Formula::eq(y.clone(), z.clone()),
                    Formula::or([
                        Formula::and([hit.clone(), Formula::eq(ut.clone(), Term::constant(1))]),
                        Formula::and([Formula::not(hit), Formula::eq(ut.clone(), Term::zero())]),
                    ]),
                ])
            };
            let width = z.sub(y);
            let scaled_u = ut.scale(&modulus);
            let equation = |i: &BigInt, j: &BigInt| {
                let c: BigInt = (j - &r).mod_floor(&modulus) - (i - BigInt::one() - &r).mod_floor(&modulus) - 1;
                Formula::eq(scaled_u.clone(), width.add_constant(&-c))
            };
            let split = if modulus.is_one() {
                equation(&BigInt::zero(), &BigInt::zero())
            } else {
                let residues: Vec<BigInt> = std::iter::successors(Some(BigInt::zero()), |i| Some(i + 1))
                    .take_while(|i| i < &modulus)
                    .collect();
                Formula::or(residues.iter().map(|i| {
                    Formula::and([
                        cong(y, i, &modulus),
                        Formula::or(
                            residues
                                .iter()
                                .map(|j| Formula::and([cong(z, j, &modulus), equation(i, j)])),
                        ),
                    ])
                }))
            };
            Formula::or([
                empty,
                single,
                Formula::and([Formula::lt(y.clone(), z.clone()), split]),
            ])
        }
        DeltaEncoding::Quotient => {
            let q1 = fresh.fresh("q");
            let q2 = fresh.fresh("q");
            let offset = if shift { &modulus - &r } else { -&r };
            let top = z.add_constant(&offset);
            let bottom = y.add_constant(&(&offset - 1));
            let floor_of = |q: &str, t: &Term| {
                let mq = Term::monomial(modulus.clone(), q);
                [
                    Formula::le(mq.clone(), t.clone()),
                    Formula::le(t.clone(), mq.add_constant(&(&modulus - 1))),
                ]
            };
            let mut body: Vec<Formula> = floor_of(&q1, &top).into();
            body.extend(floor_of(&q2, &bottom));
            body.push(Formula::eq(ut, Term::var(&q1).sub(&Term::var(&q2))));
            let quotients = Formula::exists(q1, Formula::exists(q2, Formula::and(body)));
            Formula::or([empty, Formula::and([Formula::le(y.clone(), z.clone()), quotients])])
        }
    }
}

/// A formula in the variables of `y`, `z` and `u` that holds iff
/// `u = |{x ∈ ℤ : y ≤ m·x ≤ z, x ≡ a (mod D)}|`.
pub fn build_delta_z(
    params: &DeltaParams,
    y: &Term,
    z: &Term,
    u: &str,
    encoding: DeltaEncoding,
    fresh: &mut FreshNames,
) -> Formula {
    delta_core(params, y, z, u, encoding, false, fresh)
}

/// Subtraction-free formula, valid over ℕ, that holds iff
/// `u = |{x ∈ ℕ : y₁ ≤ m·x + y₂, z₁ + m·x ≤ z₂, x ≡ a (mod D)}|`.
#[allow(clippy::too_many_arguments)]
pub fn build_delta_n(
    params: &DeltaParams,
    y1: &Term,
    y2: &Term,
    z1: &Term,
    z2: &Term,
    u: &str,
    encoding: DeltaEncoding,
    fresh: &mut FreshNames,
) -> Formula {
    let width = z2.sub(z1);
    let low = y1.sub(y2);
    let from_zero = delta_core(params, &Term::zero(), &width, u, encoding, true, fresh);
    let from_low = delta_core(params, &low, &width, u, encoding, true, fresh);
    normalize_for_n(&Formula::or([
        Formula::and([Formula::le(y1.clone(), y2.clone()), from_zero]),
        Formula::and([Formula::lt(y2.clone(), y1.clone()), from_low]),
    ]))
}
