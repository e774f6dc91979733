//! Formulas of Presburger arithmetic extended with the unary counting
//! quantifier `C x = y . φ` ("there are exactly `y` values of `x` with `φ`").
//!
//! Terms are kept in a canonical form (sorted variables, no zero
//! coefficients) and the `and`/`or` constructors flatten nested connectives,
//! so structurally equal formulas print identically.

mod eval;

pub use eval::{
    candidates, count_witnesses, count_witnesses_by, default_margin, evaluate, satisfying_values, Candidates,
    CountResult, EvalError, Interval, SatisfyingValues,
};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A linear term `constant + Σ coeff·var`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Term {
    constant: BigInt,
    coeffs: BTreeMap<String, BigInt>,
}

impl Term {
    pub fn zero() -> Self {
        Term::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Term {
            constant: c.into(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn var(name: impl Into<String>) -> Self {
        Self::monomial(BigInt::one(), name)
    }

    pub fn monomial(coeff: impl Into<BigInt>, name: impl Into<String>) -> Self {
        let coeff = coeff.into();
        let mut coeffs = BTreeMap::new();
        if !coeff.is_zero() {
            coeffs.insert(name.into(), coeff);
        }
        Term {
            constant: BigInt::zero(),
            coeffs,
        }
    }

    /// Builds a term from `(coefficient, variable)` pairs, merging repeats.
    pub fn from_parts<I, S>(constant: impl Into<BigInt>, parts: I) -> Self
    where
        I: IntoIterator<Item = (BigInt, S)>,
        S: Into<String>,
    {
        let mut t = Term::constant(constant);
        for (c, v) in parts {
            t.add_monomial(c, v.into());
        }
        t
    }

    fn add_monomial(&mut self, c: BigInt, v: String) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(v);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn constant_part(&self) -> &BigInt {
        &self.constant
    }

    /// Coefficient of `v` (zero when absent).
    pub fn coeff(&self, v: &str) -> BigInt {
        self.coeffs.get(v).cloned().unwrap_or_default()
    }

    pub fn mentions(&self, v: &str) -> bool {
        self.coeffs.contains_key(v)
    }

    /// Variables with their (nonzero) coefficients, in alphabetical order.
    pub fn monomials(&self) -> impl Iterator<Item = (&String, &BigInt)> {
        self.coeffs.iter()
    }

    pub fn vars(&self) -> impl Iterator<Item = &String> {
        self.coeffs.keys()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Term) -> Term {
        let mut t = self.clone();
        t.constant += &other.constant;
        for (v, c) in &other.coeffs {
            t.add_monomial(c.clone(), v.clone());
        }
        t
    }

    pub fn sub(&self, other: &Term) -> Term {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Term {
        self.scale(&BigInt::from(-1))
    }

    pub fn scale(&self, k: &BigInt) -> Term {
        if k.is_zero() {
            return Term::zero();
        }
        Term {
            constant: &self.constant * k,
            coeffs: self.coeffs.iter().map(|(v, c)| (v.clone(), c * k)).collect(),
        }
    }

    pub fn add_constant(&self, k: &BigInt) -> Term {
        let mut t = self.clone();
        t.constant += k;
        t
    }

    /// Drops the constant part.
    pub fn without_constant(&self) -> Term {
        Term {
            constant: BigInt::zero(),
            coeffs: self.coeffs.clone(),
        }
    }

    /// Largest absolute value among the variable coefficients (zero for constants).
    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs.values().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// Gcd of all coefficients and the constant (zero only for the zero term).
    pub fn content(&self) -> BigInt {
        self.coeffs
            .values()
            .fold(self.constant.abs(), |acc, c| acc.gcd(c))
    }

    /// Replaces `v` by `t`.
    pub fn substitute(&self, v: &str, t: &Term) -> Term {
        match self.coeffs.get(v) {
            None => self.clone(),
            Some(c) => {
                let mut rest = self.clone();
                rest.coeffs.remove(v);
                rest.add(&t.scale(c))
            }
        }
    }

    /// Splits `self` as `positive − negative`, both with nonnegative
    /// coefficients and constants.
    pub fn split_signs(&self) -> (Term, Term) {
        let mut pos = Term::zero();
        let mut neg = Term::zero();
        if self.constant.is_positive() {
            pos.constant = self.constant.clone();
        } else {
            neg.constant = -&self.constant;
        }
        for (v, c) in &self.coeffs {
            if c.is_positive() {
                pos.coeffs.insert(v.clone(), c.clone());
            } else {
                neg.coeffs.insert(v.clone(), -c);
            }
        }
        (pos, neg)
    }

    pub fn is_nonnegative_form(&self) -> bool {
        !self.constant.is_negative() && self.coeffs.values().all(|c| c.is_positive())
    }

    pub fn eval(&self, asg: &Assignment) -> Result<BigInt, EvalError> {
        let mut acc = self.constant.clone();
        for (v, c) in &self.coeffs {
            let val = asg.get(v).ok_or_else(|| EvalError::Unbound(v.clone()))?;
            acc += c * val;
        }
        Ok(acc)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::textio::print_term(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::textio::print_term(self))
    }
}

/// Comparison and congruence atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Atom {
    Le(Term, Term),
    Lt(Term, Term),
    Eq(Term, Term),
    /// `term ≡ residue (mod modulus)`, with `0 ≤ residue < modulus`.
    Cong {
        term: Term,
        residue: BigInt,
        modulus: BigInt,
    },
}

impl Atom {
    /// Congruence atom; the residue is reduced into `[0, modulus)`.
    /// Panics when `modulus < 1`.
    pub fn cong(term: Term, residue: impl Into<BigInt>, modulus: impl Into<BigInt>) -> Atom {
        let modulus = modulus.into();
        assert!(modulus.is_positive(), "congruence modulus must be positive");
        let residue = residue.into().mod_floor(&modulus);
        Atom::Cong {
            term,
            residue,
            modulus,
        }
    }

    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Atom::Le(a, b) | Atom::Lt(a, b) | Atom::Eq(a, b) => vec![a, b],
            Atom::Cong { term, .. } => vec![term],
        }
    }

    pub fn mentions(&self, v: &str) -> bool {
        self.terms().iter().any(|t| t.mentions(v))
    }

    pub fn eval(&self, asg: &Assignment) -> Result<bool, EvalError> {
        Ok(match self {
            Atom::Le(a, b) => a.eval(asg)? <= b.eval(asg)?,
            Atom::Lt(a, b) => a.eval(asg)? < b.eval(asg)?,
            Atom::Eq(a, b) => a.eval(asg)? == b.eval(asg)?,
            Atom::Cong {
                term,
                residue,
                modulus,
            } => &term.eval(asg)?.mod_floor(modulus) == residue,
        })
    }

    fn substitute(&self, v: &str, t: &Term) -> Atom {
        match self {
            Atom::Le(a, b) => Atom::Le(a.substitute(v, t), b.substitute(v, t)),
            Atom::Lt(a, b) => Atom::Lt(a.substitute(v, t), b.substitute(v, t)),
            Atom::Eq(a, b) => Atom::Eq(a.substitute(v, t), b.substitute(v, t)),
            Atom::Cong {
                term,
                residue,
                modulus,
            } => Atom::Cong {
                term: term.substitute(v, t),
                residue: residue.clone(),
                modulus: modulus.clone(),
            },
        }
    }
}

/// First-order formulas with the counting quantifier.
///
/// Implication and equivalence are not node kinds: [`Formula::implies`] and
/// [`Formula::iff`] desugar into `Not`/`And`/`Or`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
    /// `counted` is bound in `body`; `count` is a free variable.
    CountEq {
        counted: String,
        count: String,
        body: Box<Formula>,
    },
}

impl Formula {
    pub fn atom(a: Atom) -> Formula {
        Formula::Atom(a)
    }

    pub fn le(a: Term, b: Term) -> Formula {
        Formula::Atom(Atom::Le(a, b))
    }

    pub fn lt(a: Term, b: Term) -> Formula {
        Formula::Atom(Atom::Lt(a, b))
    }

    pub fn ge(a: Term, b: Term) -> Formula {
        Formula::Atom(Atom::Le(b, a))
    }

    pub fn gt(a: Term, b: Term) -> Formula {
        Formula::Atom(Atom::Lt(b, a))
    }

    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Atom(Atom::Eq(a, b))
    }

    pub fn cong(t: Term, residue: impl Into<BigInt>, modulus: impl Into<BigInt>) -> Formula {
        Formula::Atom(Atom::cong(t, residue, modulus))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    /// Conjunction, flattening nested conjunctions and dropping `true`. Empty is `true`, singleton is the element.
    pub fn and(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::And(inner) => out.extend(inner),
                Formula::True => {}
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().expect("one element"),
            _ => Formula::And(out),
        }
    }

    /// Disjunction, flattening nested disjunctions and dropping `false`. Empty is `false`, singleton is the element.
    pub fn or(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::Or(inner) => out.extend(inner),
                Formula::False => {}
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().expect("one element"),
            _ => Formula::Or(out),
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::or([Formula::not(a), b])
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and([
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        ])
    }

    pub fn exists(v: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(v.into(), Box::new(body))
    }

    pub fn forall(v: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(v.into(), Box::new(body))
    }

    pub fn count_eq(counted: impl Into<String>, count: impl Into<String>, body: Formula) -> Formula {
        Formula::CountEq {
            counted: counted.into(),
            count: count.into(),
            body: Box::new(body),
        }
    }

    pub fn is_quantifier(&self) -> bool {
        matches!(
            self,
            Formula::Exists(..) | Formula::Forall(..) | Formula::CountEq { .. }
        )
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => {
                for t in a.terms() {
                    for v in t.vars() {
                        if !bound.contains(&v.as_str()) {
                            out.insert(v.clone());
                        }
                    }
                }
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    f.collect_free(bound, out);
                }
            }
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                bound.push(v);
                body.collect_free(bound, out);
                bound.pop();
            }
            Formula::CountEq { counted, count, body } => {
                if !bound.contains(&count.as_str()) {
                    out.insert(count.clone());
                }
                bound.push(counted);
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Whether `v` occurs free.
    pub fn mentions(&self, v: &str) -> bool {
        match self {
            Formula::True | Formula::False => false,
            Formula::Atom(a) => a.mentions(v),
            Formula::Not(f) => f.mentions(v),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().any(|f| f.mentions(v)),
            Formula::Exists(w, body) | Formula::Forall(w, body) => w != v && body.mentions(v),
            Formula::CountEq { counted, count, body } => count == v || (counted != v && body.mentions(v)),
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom(a) => {
                for t in a.terms() {
                    out.extend(t.vars().cloned());
                }
            }
            Formula::Exists(v, _) | Formula::Forall(v, _) => {
                out.insert(v.clone());
            }
            Formula::CountEq { counted, count, .. } => {
                out.insert(counted.clone());
                out.insert(count.clone());
            }
            _ => {}
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => g.visit(f),
            Formula::CountEq { body, .. } => body.visit(f),
            Formula::And(gs) | Formula::Or(gs) => {
                for g in gs {
                    g.visit(f);
                }
            }
            _ => {}
        }
    }

    pub fn node_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    pub fn contains_count_eq(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| found |= matches!(f, Formula::CountEq { .. }));
        found
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.visit(&mut |f| {
            if let Formula::Atom(a) = f {
                out.push(a);
            }
        });
        out
    }

    /// Rebuilds the formula with every atom passed through `f`.
    pub fn map_atoms(&self, f: &mut impl FnMut(&Atom) -> Formula) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(a) => f(a),
            Formula::Not(g) => Formula::not(g.map_atoms(f)),
            Formula::And(gs) => Formula::and(gs.iter().map(|g| g.map_atoms(f)).collect::<Vec<_>>()),
            Formula::Or(gs) => Formula::or(gs.iter().map(|g| g.map_atoms(f)).collect::<Vec<_>>()),
            Formula::Exists(v, g) => Formula::exists(v.clone(), g.map_atoms(f)),
            Formula::Forall(v, g) => Formula::forall(v.clone(), g.map_atoms(f)),
            Formula::CountEq { counted, count, body } => {
                Formula::count_eq(counted.clone(), count.clone(), body.map_atoms(f))
            }
        }
    }

    /// Capture-avoiding substitution of the free occurrences of `v` by `t`.
    ///
    /// Bound variables that would capture a variable of `t` are renamed to
    /// fresh `_v<k>` names. A counting variable replaced by a non-variable
    /// term is routed through an existential: `∃w (w = t ∧ C x = w . φ)`.
    pub fn substitute(&self, v: &str, t: &Term) -> Formula {
        let mut names = self.all_names();
        names.extend(t.vars().cloned());
        let mut fresh = FreshNames::avoiding(names);
        self.subst_inner(v, t, &mut fresh)
    }

    fn subst_inner(&self, v: &str, t: &Term, fresh: &mut FreshNames) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(a) => Formula::Atom(a.substitute(v, t)),
            Formula::Not(g) => Formula::not(g.subst_inner(v, t, fresh)),
            Formula::And(gs) => Formula::and(gs.iter().map(|g| g.subst_inner(v, t, fresh)).collect::<Vec<_>>()),
            Formula::Or(gs) => Formula::or(gs.iter().map(|g| g.subst_inner(v, t, fresh)).collect::<Vec<_>>()),
            Formula::Exists(w, body) | Formula::Forall(w, body) => {
                let rebuild = |w: String, b: Formula| match self {
                    Formula::Exists(..) => Formula::exists(w, b),
                    _ => Formula::forall(w, b),
                };
                if w == v || !body.mentions(v) {
                    return self.clone();
                }
                if t.mentions(w) {
                    let w2 = fresh.fresh("v");
                    let renamed = body.subst_inner(w, &Term::var(&w2), fresh);
                    rebuild(w2, renamed.subst_inner(v, t, fresh))
                } else {
                    rebuild(w.clone(), body.subst_inner(v, t, fresh))
                }
            }
            Formula::CountEq { counted, count, body } => {
                let (counted, body) = if counted != v && body.mentions(v) {
                    if t.mentions(counted) {
                        let c2 = fresh.fresh("v");
                        let renamed = body.subst_inner(counted, &Term::var(&c2), fresh);
                        (c2, renamed.subst_inner(v, t, fresh))
                    } else {
                        (counted.clone(), body.subst_inner(v, t, fresh))
                    }
                } else {
                    (counted.clone(), (**body).clone())
                };
                Formula::CountEq {
                    counted,
                    count: count.clone(),
                    body: Box::new(body),
                }
                .subst_count(v, t, fresh)
            }
        }
    }

    /// Replaces the count variable of a `CountEq` node when it is `v`.
    fn subst_count(self, v: &str, t: &Term, fresh: &mut FreshNames) -> Formula {
        let Formula::CountEq { counted, count, body } = self else {
            return self;
        };
        if count != v {
            return Formula::CountEq { counted, count, body };
        }
        let single_var = t.constant_part().is_zero() && t.monomials().count() == 1 && t.monomials().all(|(_, c)| c.is_one());
        if single_var {
            let name = t.vars().next().expect("one variable").clone();
            if name != counted {
                return Formula::CountEq {
                    counted,
                    count: name,
                    body,
                };
            }
        }
        let w = fresh.fresh("v");
        Formula::exists(
            w.clone(),
            Formula::and([
                Formula::eq(Term::var(&w), t.clone()),
                Formula::CountEq { counted, count: w, body },
            ]),
        )
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::textio::print_formula(self))
    }
}

/// Values for variables.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Assignment(BTreeMap<String, BigInt>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: &str) -> Option<&BigInt> {
        self.0.get(v)
    }

    pub fn insert(&mut self, v: impl Into<String>, val: impl Into<BigInt>) -> Option<BigInt> {
        self.0.insert(v.into(), val.into())
    }

    pub fn remove(&mut self, v: &str) -> Option<BigInt> {
        self.0.remove(v)
    }

    pub fn with(mut self, v: impl Into<String>, val: impl Into<BigInt>) -> Self {
        self.insert(v, val);
        self
    }

    pub fn contains(&self, v: &str) -> bool {
        self.0.contains_key(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &BigInt)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<S: Into<String>, V: Into<BigInt>> FromIterator<(S, V)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (S, V)>>(iter: I) -> Self {
        Assignment(iter.into_iter().map(|(k, v)| (k.into(), v.into())).collect())
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

/// Prefix reserved for generated variable names.
pub const RESERVED_PREFIX: char = '_';

/// Generator of `_<stem><k>` names from one monotone counter.
#[derive(Debug, Clone, Default)]
pub struct FreshNames {
    next: usize,
    avoid: BTreeSet<String>,
}

impl FreshNames {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn avoiding(avoid: BTreeSet<String>) -> Self {
        FreshNames { next: 0, avoid }
    }

    pub fn fresh(&mut self, stem: &str) -> String {
        loop {
            let name = format!("{RESERVED_PREFIX}{stem}{}", self.next);
            self.next += 1;
            if !self.avoid.contains(&name) {
                return name;
            }
        }
    }

    /// Number of names handed out so far (including skipped ones).
    pub fn issued(&self) -> usize {
        self.next
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textio::{parse_formula, print_formula};

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn free_var_examples() {
        let f = p("C x = y . (-1 <= x & x <= 3)");
        assert_eq!(f.free_vars(), BTreeSet::from(["y".to_string()]));
        assert_eq!(p("x = 5").free_vars(), BTreeSet::from(["x".to_string()]));
        assert_eq!(p("E x . x = z").free_vars(), BTreeSet::from(["z".to_string()]));
    }

    #[test]
    fn substitution_examples() {
        let t = Term::from_parts(1, [(BigInt::from(2), "z")]);
        assert_eq!(print_formula(&p("x <= y").substitute("x", &t)), "2*z + 1 <= y");

        let captured = p("E x . x = y").substitute("y", &Term::var("x"));
        assert_eq!(print_formula(&captured), "E _v0 . _v0 = x");

        assert_eq!(
            print_formula(&p("x == 0 mod 2").substitute("x", &Term::constant(3))),
            "3 == 0 mod 2"
        );
    }

    #[test]
    fn substitution_on_count_variable() {
        let f = p("C x = y . x = 3");
        assert_eq!(print_formula(&f.substitute("y", &Term::var("w"))), "C x = w . x = 3");
        assert_eq!(
            print_formula(&f.substitute("y", &Term::constant(1))),
            "E _v0 . (_v0 = 1 & C x = _v0 . x = 3)"
        );
        // the counted variable is bound, so substituting it is a no-op
        assert_eq!(f.substitute("x", &Term::constant(7)), f);
    }

    #[test]
    fn term_arithmetic() {
        let t = Term::from_parts(-3, [(BigInt::from(2), "x"), (BigInt::from(-1), "y"), (BigInt::from(1), "x")]);
        assert_eq!(t.coeff("x"), BigInt::from(3));
        assert_eq!(t.sub(&t), Term::zero());
        let (pos, neg) = t.split_signs();
        assert_eq!(pos.sub(&neg), t);
        assert!(pos.is_nonnegative_form() && neg.is_nonnegative_form());
        assert_eq!(t.content(), BigInt::from(1));
        assert_eq!(Term::from_parts(6, [(BigInt::from(4), "x")]).content(), BigInt::from(2));
    }

    #[test]
    fn connectives_flatten() {
        let a = p("x = 1");
        let b = p("x = 2");
        let c = p("x = 3");
        let nested = Formula::and([a.clone(), Formula::and([b.clone(), c.clone()])]);
        assert_eq!(nested, Formula::And(vec![a.clone(), b, c]));
        assert_eq!(Formula::and([]), Formula::True);
        assert_eq!(Formula::or([a.clone()]), a);
    }
}
