//! Bounded-domain evaluation and the brute-force witness counter.
//!
//! Quantifiers range over `[-B, B]` (over ℤ) or `[0, B]` (over ℕ). Before a
//! bound variable is enumerated, a syntactic candidate analysis narrows the
//! values worth trying: an equation `c·v + rest = 0` with `rest` known pins `v`
//! to at most one value, inequalities give half-lines, conjunction intersects
//! and disjunction joins. The analysis only ever over-approximates, so the
//! result is exactly the bounded semantics, just without trying values that
//! cannot work.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::{Assignment, Atom, Formula, Term};
use crate::sets::DomainTag;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable `{0}` has no value")]
    Unbound(String),
    #[error("variable `{0}` is negative but the domain is N")]
    NegativeInN(String),
    #[error("invalid bound: {0}")]
    InvalidBound(String),
}

/// Inclusive integer interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigInt,
    pub hi: BigInt,
}

impl Interval {
    pub fn new(lo: impl Into<BigInt>, hi: impl Into<BigInt>) -> Self {
        Interval {
            lo: lo.into(),
            hi: hi.into(),
        }
    }

    /// `[-r, r]`.
    pub fn symmetric(r: impl Into<BigInt>) -> Self {
        let r = r.into();
        Interval { lo: -&r, hi: r }
    }

    /// The range a quantifier with bound `b` ranges over in `domain`.
    pub fn quantifier_range(domain: DomainTag, b: &BigInt) -> Self {
        match domain {
            DomainTag::Z => Interval::symmetric(b.clone()),
            DomainTag::N => Interval::new(BigInt::zero(), b.clone()),
        }
    }

    pub fn contains(&self, v: &BigInt) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }
}

/// Result of counting witnesses inside a window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountResult {
    pub count: BigInt,
    /// No witness lies closer than the margin to an open end of the window.
    /// When false the count is only a lower bound.
    pub stable: bool,
}

/// Over-approximation of the values of one variable that can satisfy a formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Candidates {
    All,
    Range { lo: Option<BigInt>, hi: Option<BigInt> },
    Finite(BTreeSet<BigInt>),
}

impl Candidates {
    pub fn none() -> Self {
        Candidates::Finite(BTreeSet::new())
    }

    fn single(v: BigInt) -> Self {
        Candidates::Finite(BTreeSet::from([v]))
    }

    fn range(lo: Option<BigInt>, hi: Option<BigInt>) -> Self {
        match (&lo, &hi) {
            (None, None) => Candidates::All,
            (Some(l), Some(h)) if l > h => Candidates::none(),
            _ => Candidates::Range { lo, hi },
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Candidates::Finite(s) if s.is_empty())
    }

    fn is_bounded(&self) -> bool {
        matches!(
            self,
            Candidates::Finite(_) | Candidates::Range { lo: Some(_), hi: Some(_) }
        )
    }

    /// Number of candidate values, when finite.
    pub fn size(&self) -> Option<BigInt> {
        match self {
            Candidates::Finite(s) => Some(BigInt::from(s.len())),
            Candidates::Range {
                lo: Some(l),
                hi: Some(h),
            } => Some(h - l + 1),
            _ => None,
        }
    }

    pub fn contains(&self, v: &BigInt) -> bool {
        match self {
            Candidates::All => true,
            Candidates::Range { lo, hi } => {
                lo.as_ref().is_none_or(|l| l <= v) && hi.as_ref().is_none_or(|h| v <= h)
            }
            Candidates::Finite(s) => s.contains(v),
        }
    }

    pub fn intersect(self, other: Candidates) -> Candidates {
        match (self, other) {
            (Candidates::All, c) | (c, Candidates::All) => c,
            (Candidates::Finite(a), Candidates::Finite(b)) => {
                Candidates::Finite(a.intersection(&b).cloned().collect())
            }
            (Candidates::Finite(a), r @ Candidates::Range { .. })
            | (r @ Candidates::Range { .. }, Candidates::Finite(a)) => {
                Candidates::Finite(a.into_iter().filter(|v| r.contains(v)).collect())
            }
            (Candidates::Range { lo: l1, hi: h1 }, Candidates::Range { lo: l2, hi: h2 }) => {
                let lo = match (l1, l2) {
                    (Some(a), Some(b)) => Some(a.max(b)),
                    (a, b) => a.or(b),
                };
                let hi = match (h1, h2) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (a, b) => a.or(b),
                };
                Candidates::range(lo, hi)
            }
        }
    }

    pub fn union(self, other: Candidates) -> Candidates {
        match (self, other) {
            (Candidates::All, _) | (_, Candidates::All) => Candidates::All,
            (Candidates::Finite(mut a), Candidates::Finite(b)) => {
                a.extend(b);
                Candidates::Finite(a)
            }
            (Candidates::Finite(a), r @ Candidates::Range { .. })
            | (r @ Candidates::Range { .. }, Candidates::Finite(a)) => {
                if a.is_empty() {
                    return r;
                }
                let (Candidates::Range { lo, hi }, Some(min), Some(max)) = (r, a.first(), a.last()) else {
                    unreachable!("finite set is non-empty")
                };
                Candidates::range(lo.map(|l| l.min(min.clone())), hi.map(|h| h.max(max.clone())))
            }
            (Candidates::Range { lo: l1, hi: h1 }, Candidates::Range { lo: l2, hi: h2 }) => {
                let lo = match (l1, l2) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    _ => None,
                };
                let hi = match (h1, h2) {
                    (Some(a), Some(b)) => Some(a.max(b)),
                    _ => None,
                };
                Candidates::range(lo, hi)
            }
        }
    }

    fn clip(self, window: &Interval) -> Candidates {
        self.intersect(Candidates::Range {
            lo: Some(window.lo.clone()),
            hi: Some(window.hi.clone()),
        })
    }

    /// The candidate values inside `window`, ascending.
    fn values_in(&self, window: &Interval) -> Box<dyn Iterator<Item = BigInt> + '_> {
        match self.clone().clip(window) {
            Candidates::Finite(s) => Box::new(s.into_iter()),
            Candidates::Range {
                lo: Some(l),
                hi: Some(h),
            } => Box::new(num_iter_inclusive(l, h)),
            _ => unreachable!("clipped candidates are bounded"),
        }
    }
}

impl Candidates {
    fn from_bool(b: bool) -> Self {
        if b {
            Candidates::All
        } else {
            Candidates::none()
        }
    }
}

/// Wrapper retained for the `Range` variant with unbounded ends removed.
fn num_iter_inclusive(lo: BigInt, hi: BigInt) -> impl Iterator<Item = BigInt> {
    let mut cur = lo;
    std::iter::from_fn(move || {
        if cur > hi {
            None
        } else {
            let out = cur.clone();
            cur += 1;
            Some(out)
        }
    })
}

/// Candidate sets at most this large are enumerated when looking through an
/// inner existential.
const DESCEND_LIMIT: u32 = 8;

struct Evaluator {
    domain: DomainTag,
    range: Interval,
}

fn with_binding<R>(asg: &mut Assignment, v: &str, val: Option<BigInt>, f: impl FnOnce(&mut Assignment) -> R) -> R {
    let old = match val {
        Some(x) => asg.insert(v, x),
        None => asg.remove(v),
    };
    let out = f(asg);
    match old {
        Some(x) => {
            asg.insert(v, x);
        }
        None => {
            asg.remove(v);
        }
    }
    out
}

impl Evaluator {
    fn new(domain: DomainTag, quant_bound: &BigInt) -> Result<Self, EvalError> {
        if !quant_bound.is_positive() {
            return Err(EvalError::InvalidBound(format!("quantifier bound {quant_bound} is not positive")));
        }
        Ok(Evaluator {
            domain,
            range: Interval::quantifier_range(domain, quant_bound),
        })
    }

    fn eval(&self, f: &Formula, asg: &mut Assignment) -> Result<bool, EvalError> {
        match f {
            Formula::True => Ok(true),
            Formula::False => Ok(false),
            Formula::Atom(a) => a.eval(asg),
            Formula::Not(g) => Ok(!self.eval(g, asg)?),
            Formula::And(gs) => {
                for g in gs {
                    if !self.eval(g, asg)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Formula::Or(gs) => {
                for g in gs {
                    if self.eval(g, asg)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Formula::Exists(v, body) => with_binding(asg, v, None, |asg| {
                let cands = self.cand(v, body, asg);
                for val in cands.values_in(&self.range) {
                    let hit = with_binding(asg, v, Some(val), |asg| self.eval(body, asg))?;
                    if hit {
                        return Ok(true);
                    }
                }
                Ok(false)
            }),
            Formula::Forall(v, body) => {
                for val in num_iter_inclusive(self.range.lo.clone(), self.range.hi.clone()) {
                    let hit = with_binding(asg, v, Some(val), |asg| self.eval(body, asg))?;
                    if !hit {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Formula::CountEq { counted, count, body } => {
                let target = asg.get(count).cloned().ok_or_else(|| EvalError::Unbound(count.clone()))?;
                if target.is_negative() {
                    return Ok(false);
                }
                let margin = default_margin(body);
                let res = self.count(body, counted, asg, &self.range.clone(), &margin)?;
                Ok(res.stable && res.count == target)
            }
        }
    }

    fn count(
        &self,
        body: &Formula,
        var: &str,
        asg: &mut Assignment,
        window: &Interval,
        margin: &BigInt,
    ) -> Result<CountResult, EvalError> {
        with_binding(asg, var, None, |asg| {
            let cands = self.cand(var, body, asg);
            let candidate_values: Vec<BigInt> = cands.values_in(&window_for(self.domain, window)).collect();
            count_over(self.domain, window, margin, candidate_values.into_iter(), |v| {
                with_binding(asg, var, Some(v.clone()), |asg| self.eval(body, asg))
            })
        })
    }

    /// Candidate values of `v` (which must be unassigned in `asg`) for `f`.
    fn cand(&self, v: &str, f: &Formula, asg: &mut Assignment) -> Candidates {
        match f {
            Formula::True => Candidates::All,
            Formula::False => Candidates::none(),
            Formula::Atom(a) => {
                if a.mentions(v) {
                    atom_candidates(v, a, asg)
                } else {
                    a.eval(asg).map(Candidates::from_bool).unwrap_or(Candidates::All)
                }
            }
            Formula::And(gs) => {
                let mut acc = Candidates::All;
                for g in gs.iter().filter(|g| !g.is_quantifier()) {
                    acc = acc.intersect(self.cand(v, g, asg));
                    if acc.is_empty() {
                        return acc;
                    }
                }
                for g in gs.iter().filter(|g| g.is_quantifier()) {
                    if acc.is_bounded() {
                        break;
                    }
                    acc = acc.intersect(self.cand(v, g, asg));
                    if acc.is_empty() {
                        return acc;
                    }
                }
                acc
            }
            Formula::Or(gs) => {
                let mut acc = Candidates::none();
                for g in gs {
                    acc = acc.union(self.cand(v, g, asg));
                    if acc == Candidates::All {
                        return acc;
                    }
                }
                acc
            }
            Formula::Exists(w, body) if w != v => with_binding(asg, w, None, |asg| {
                let inner = self.cand(w, body, asg).clip(&self.range);
                let small = inner.size().is_some_and(|s| s <= BigInt::from(DESCEND_LIMIT));
                if small {
                    let mut acc = Candidates::none();
                    for val in inner.values_in(&self.range) {
                        let c = with_binding(asg, w, Some(val), |asg| self.cand(v, body, asg));
                        acc = acc.union(c);
                        if acc == Candidates::All {
                            break;
                        }
                    }
                    acc
                } else {
                    self.cand(v, body, asg)
                }
            }),
            Formula::Not(_) | Formula::Exists(..) | Formula::Forall(..) | Formula::CountEq { .. } => {
                self.eval(f, asg).map(Candidates::from_bool).unwrap_or(Candidates::All)
            }
        }
    }
}

fn window_for(domain: DomainTag, window: &Interval) -> Interval {
    match domain {
        DomainTag::Z => window.clone(),
        DomainTag::N => Interval {
            lo: window.lo.clone().max(BigInt::zero()),
            hi: window.hi.clone(),
        },
    }
}

fn count_over<E>(
    domain: DomainTag,
    window: &Interval,
    margin: &BigInt,
    values: impl Iterator<Item = BigInt>,
    mut pred: impl FnMut(&BigInt) -> Result<bool, E>,
) -> Result<CountResult, E> {
    let effective = window_for(domain, window);
    // Over N the lower end at 0 is the end of the domain, not of the window.
    let lower_open = !(domain == DomainTag::N && effective.lo.is_zero() && window.lo <= BigInt::zero());
    let mut count = BigInt::zero();
    let mut stable = true;
    for v in values {
        if !effective.contains(&v) || !pred(&v)? {
            continue;
        }
        count += 1;
        let near_hi = &(&effective.hi - &v) < margin;
        let near_lo = lower_open && &(&v - &effective.lo) < margin;
        if near_hi || near_lo {
            stable = false;
        }
    }
    Ok(CountResult { count, stable })
}

/// Candidates for `v` from a single atom that mentions it.
fn atom_candidates(v: &str, a: &Atom, asg: &Assignment) -> Candidates {
    let (diff, strict, is_eq) = match a {
        Atom::Le(l, r) => (l.sub(r), false, false),
        Atom::Lt(l, r) => (l.sub(r), true, false),
        Atom::Eq(l, r) => (l.sub(r), false, true),
        Atom::Cong { .. } => return Candidates::All,
    };
    let c = diff.coeff(v);
    if c.is_zero() {
        return diff.eval(asg).map(|k| {
            let holds = if is_eq {
                k.is_zero()
            } else if strict {
                k.is_negative()
            } else {
                !k.is_positive()
            };
            Candidates::from_bool(holds)
        })
        .unwrap_or(Candidates::All);
    }
    let rest = diff.substitute(v, &Term::zero());
    let Ok(mut k) = rest.eval(asg) else {
        return Candidates::All;
    };
    if is_eq {
        let (q, r) = (-&k).div_rem(&c);
        return if r.is_zero() {
            Candidates::single(q)
        } else {
            Candidates::none()
        };
    }
    if strict {
        k += BigInt::one();
    }
    // c·v + k ≤ 0
    if c.is_positive() {
        Candidates::range(None, Some((-&k).div_floor(&c)))
    } else {
        let pc = -&c;
        Candidates::range(Some(k.div_ceil(&pc)), None)
    }
}

/// `2·(largest absolute variable coefficient in the body + 1)`.
pub fn default_margin(body: &Formula) -> BigInt {
    let max = body
        .atoms()
        .iter()
        .flat_map(|a| a.terms())
        .map(Term::max_abs_coeff)
        .max()
        .unwrap_or_default();
    BigInt::from(2) * (max + 1)
}

fn check_assignment(asg: &Assignment, domain: DomainTag) -> Result<(), EvalError> {
    if domain == DomainTag::N {
        if let Some((v, _)) = asg.iter().find(|(_, val)| val.is_negative()) {
            return Err(EvalError::NegativeInN(v.clone()));
        }
    }
    Ok(())
}

/// Truth value under bounded quantifier semantics.
///
/// `CountEq(x, y, φ)` holds iff the witnesses of `φ` in the quantifier range
/// number exactly `y` and none is within the default margin of an open end of
/// that range.
pub fn evaluate(f: &Formula, asg: &Assignment, domain: DomainTag, quant_bound: &BigInt) -> Result<bool, EvalError> {
    check_assignment(asg, domain)?;
    let ev = Evaluator::new(domain, quant_bound)?;
    ev.eval(f, &mut asg.clone())
}

/// Counts the values of `counted` in `window` (intersected with the domain)
/// satisfying `body`.
pub fn count_witnesses(
    body: &Formula,
    counted: &str,
    asg: &Assignment,
    domain: DomainTag,
    window: &Interval,
    margin: &BigInt,
    quant_bound: &BigInt,
) -> Result<CountResult, EvalError> {
    check_assignment(asg, domain)?;
    if !margin.is_positive() {
        return Err(EvalError::InvalidBound(format!("margin {margin} is not positive")));
    }
    let ev = Evaluator::new(domain, quant_bound)?;
    ev.count(body, counted, &mut asg.clone(), window, margin)
}

/// Counting over an arbitrary predicate, with the same window and stability rules.
pub fn count_witnesses_by<E>(
    domain: DomainTag,
    window: &Interval,
    margin: &BigInt,
    pred: impl FnMut(&BigInt) -> Result<bool, E>,
) -> Result<CountResult, E> {
    let effective = window_for(domain, window);
    let values = num_iter_inclusive(effective.lo.clone(), effective.hi.clone());
    count_over(domain, window, margin, values, pred)
}

/// Candidate analysis for `var` in `f`; exposed for testing and diagnostics.
pub fn candidates(
    f: &Formula,
    var: &str,
    asg: &Assignment,
    domain: DomainTag,
    quant_bound: &BigInt,
) -> Result<Candidates, EvalError> {
    let ev = Evaluator::new(domain, quant_bound)?;
    let mut asg = asg.clone();
    asg.remove(var);
    Ok(ev.cand(var, f, &mut asg))
}

/// Values of a free variable making a formula true.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatisfyingValues {
    pub values: Vec<BigInt>,
    /// True when the candidate analysis proved there are no values outside
    /// `values`; false when only the fallback range was scanned.
    pub exhaustive: bool,
}

/// Finite candidate sets up to this size are checked one by one.
const EXHAUSTIVE_LIMIT: u32 = 100_000;

/// All values of `var` for which `f` holds. If the candidate analysis yields a
/// finite set the answer is exhaustive; otherwise `fallback` is scanned.
pub fn satisfying_values(
    f: &Formula,
    var: &str,
    asg: &Assignment,
    domain: DomainTag,
    quant_bound: &BigInt,
    fallback: &Interval,
) -> Result<SatisfyingValues, EvalError> {
    check_assignment(asg, domain)?;
    let ev = Evaluator::new(domain, quant_bound)?;
    let mut asg = asg.clone();
    asg.remove(var);
    let mut cands = ev.cand(var, f, &mut asg);
    if domain == DomainTag::N {
        cands = cands.intersect(Candidates::Range {
            lo: Some(BigInt::zero()),
            hi: None,
        });
    }
    let finite = cands
        .size()
        .is_some_and(|s| s.to_u64().is_some_and(|s| s <= u64::from(EXHAUSTIVE_LIMIT)));
    let (scan, exhaustive) = match (&cands, finite) {
        (Candidates::Finite(s), true) => {
            let w = match (s.first(), s.last()) {
                (Some(a), Some(b)) => Interval::new(a.clone(), b.clone()),
                _ => Interval::new(1, 0),
            };
            (w, true)
        }
        (Candidates::Range { lo: Some(l), hi: Some(h) }, true) => (Interval::new(l.clone(), h.clone()), true),
        _ => (window_for(domain, fallback), false),
    };
    let mut values = Vec::new();
    if !scan.is_empty() {
        for v in cands.values_in(&scan) {
            if with_binding(&mut asg, var, Some(v.clone()), |asg| ev.eval(f, asg))? {
                values.push(v);
            }
        }
    }
    Ok(SatisfyingValues { values, exhaustive })
}
