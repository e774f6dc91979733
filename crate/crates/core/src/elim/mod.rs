//! Elimination of the counting quantifier over disjoint simple semilinear sets.
//!
//! The count of a union of pairwise disjoint linear sets is the sum of the
//! per-component counts. For one simple component `a + ℕb₁ + ⋯ + ℕb_p` with
//! counted coordinate `x_n`, let `M` be its `n × p` period matrix.
//!
//! * If some `p` rows other than the last have full rank, `x_n` is a function
//!   of the other coordinates and there are zero or one witnesses.
//! * Otherwise every full-rank selection uses the last row. A core of `p − 1`
//!   free rows plus the last row determines `z` by Cramer's rule, the
//!   remaining rows become linear relations among free coordinates, and the
//!   witnesses form an arithmetic progression cut out by the bounds of
//!   [`classify_bounds`]. The count is summed over the residue classes of
//!   `x_n` modulo `D` and over the orderings of the bounds.
//!
//! Over ℕ the same construction is used with the ℕ counting formula and every
//! atom is put in subtraction-free form at the end.

mod bounds;
mod delta;
mod natural;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

pub use bounds::{
    build_permutation_branches, build_residue_cases, classify_bounds, feasible_cases_by_residue,
    residue_case_feasible, residue_cases, BoundClassification, PermutationBranch, ResidueCase, MAX_RESIDUE_CASES,
};
pub use delta::{build_delta_n, build_delta_z, count_in_progression, DeltaEncoding, DeltaParams};
pub use natural::{is_subtraction_free, normalize_atom, normalize_for_n};

use crate::formula::{Formula, FreshNames, Term, RESERVED_PREFIX};
use crate::linalg::{
    cramer_solve, find_full_rank_submatrix, greedy_independent_rows, CramerSolution, IntVector, LinalgError,
    RowSelection,
};
use crate::sets::{check_simple, default_coordinate_names, DomainTag, LinearSetPresentation, SemilinearPresentation};
use crate::textio::{is_keyword, print_formula, print_term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElimError {
    #[error("presentation is not asserted disjoint")]
    NotAssertedDisjoint,
    #[error("presentation is not asserted simple")]
    NotAssertedSimple,
    #[error("component {0} is not simple: its periods are linearly dependent")]
    NotSimple(usize),
    #[error("domain mismatch: expected {expected}, found {found}")]
    DomainMismatch { expected: DomainTag, found: DomainTag },
    #[error("counted coordinate {index} is out of range for dimension {dim}")]
    CountedOutOfRange { index: usize, dim: usize },
    #[error("invalid variable name `{0}`")]
    InvalidName(String),
    #[error("expected {expected} coordinate names, got {found}")]
    CoordinateCount { expected: usize, found: usize },
    #[error("invalid counting parameters: {0}")]
    Parameter(String),
    #[error("bounds are one-sided: the witness set is unbounded")]
    UnboundedCount,
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// How the residue-class guard on the free coordinates is written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GuardEncoding {
    /// A disjunction over the feasible residue vectors `f`, each a conjunction
    /// of one congruence per free coordinate.
    #[default]
    Enumerated,
    /// One congruence per Cramer row, `Σλ_{i,j}x_j + λ_{i,p}·a + γᵢ ≡ 0 (mod D)`.
    Lattice,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElimOptions {
    /// Index of the counted coordinate; the last one when `None`.
    pub counted: Option<usize>,
    pub count_var: String,
    /// Coordinate names; `x1, …, xn` when `None`.
    pub coordinates: Option<Vec<String>>,
    pub delta: DeltaEncoding,
    pub guards: GuardEncoding,
}

impl Default for ElimOptions {
    fn default() -> Self {
        ElimOptions {
            counted: None,
            count_var: "y".into(),
            coordinates: None,
            delta: DeltaEncoding::default(),
            guards: GuardEncoding::default(),
        }
    }
}

/// Data computed for the at-most-one-witness case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterminedPlan {
    /// Full-rank rows avoiding the counted coordinate; `None` when `p = 0`.
    pub selection: Option<RowSelection>,
    pub cramer: Option<CramerSolution>,
}

/// Data computed for the interval-counting case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalPlan {
    /// The `p − 1` free core rows, increasing.
    pub free_rows: Vec<usize>,
    /// Rows outside the core other than the counted one.
    pub dropped_rows: Vec<usize>,
    /// Solution of the core system with columns `free_rows` then the counted row.
    pub cramer: CramerSolution,
    pub bounds: BoundClassification,
    /// `feasible[a]` lists the feasible residue vectors `f` for `x_n ≡ a (mod D)`.
    pub feasible: Vec<Vec<Vec<BigInt>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComponentPlan {
    Determined(DeterminedPlan),
    Interval(IntervalPlan),
}

/// Which of the two constructions a component used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EliminationCase {
    /// The counted coordinate is determined by the others: count 0 or 1.
    Determined,
    /// The witnesses form a bounded or unbounded progression.
    Interval,
}

/// The presentation after moving the counted coordinate last, with plans.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub domain: DomainTag,
    /// Coordinate names in the internal order; the counted one is last.
    pub coordinates: Vec<String>,
    pub components: Vec<LinearSetPresentation>,
    pub plans: Vec<ComponentPlan>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentReport {
    pub case: EliminationCase,
    pub periods: usize,
    pub denom: BigInt,
    pub m: Option<BigInt>,
    /// Rows used to solve for `z`, by coordinate name.
    pub solved_rows: Vec<String>,
    pub dropped_rows: Vec<String>,
    /// `D·zᵢ = …` in the text syntax.
    pub cramer_equations: Vec<String>,
    /// Nontrivial integrality congruences, reduced modulo `D`.
    pub integrality: Vec<String>,
    pub upper: Vec<usize>,
    pub lower: Vec<usize>,
    pub sign: Vec<usize>,
    pub residue_cases: BigInt,
    pub feasible_cases: usize,
    pub branches_per_case: usize,
    pub count_vars: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationReport {
    pub domain: DomainTag,
    pub counted: String,
    pub count_var: String,
    pub delta: DeltaEncoding,
    pub guards: GuardEncoding,
    pub components: Vec<ComponentReport>,
    pub node_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationResult {
    pub formula: Formula,
    pub count_var: String,
    pub report: EliminationReport,
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !is_keyword(s)
        && !s.starts_with(RESERVED_PREFIX)
}

fn integrality_terms(cs: &CramerSolution, names: &[String]) -> Vec<Term> {
    (0..cs.size())
        .map(|i| {
            let parts = names.iter().enumerate().map(|(j, v)| (cs.lambda.get(i, j).clone(), v.clone()));
            Term::from_parts(cs.gamma[i].clone(), parts)
        })
        .collect()
}

/// `Σ_j λ_{i,j}·x_j + γᵢ ≡ 0 (mod D)` for each row, reduced, omitting those
/// that always hold or repeat an earlier row.
pub fn integrality_conditions(cs: &CramerSolution, names: &[String]) -> Vec<Formula> {
    if cs.denom.is_one() {
        return Vec::new();
    }
    let mut out: Vec<Formula> = Vec::new();
    for t in integrality_terms(cs, names) {
        let a = normalize_atom(&crate::formula::Atom::cong(t, 0, cs.denom.clone()));
        if matches!(&a, crate::formula::Atom::Cong { term, residue, .. } if term.is_constant() && residue.is_zero()) {
            continue;
        }
        let f = Formula::Atom(a);
        if !out.contains(&f) {
            out.push(f);
        }
    }
    out
}

/// `D·zᵢ = Σ_j λ_{i,j}·x_j + γᵢ` as text, with `z1, …, zp`.
pub fn cramer_equations(cs: &CramerSolution, names: &[String]) -> Vec<String> {
    integrality_terms(cs, names)
        .iter()
        .enumerate()
        .map(|(i, t)| format!("{} = {}", print_term(&Term::monomial(cs.denom.clone(), format!("z{}", i + 1))), print_term(t)))
        .collect()
}

/// `D·x_j = D·a_j + Σᵢ b_{j,i}·(D·zᵢ)` with `D·z` replaced by the Cramer
/// expressions over `core`, divided by its content. `skip` is a core column
/// whose coefficient must vanish.
fn row_relation(
    l: &LinearSetPresentation,
    j: usize,
    x_j: &str,
    cs: &CramerSolution,
    core: &[String],
    skip: Option<usize>,
) -> Result<Formula, ElimError> {
    let p = cs.size();
    let d = &cs.denom;
    let b: Vec<&BigInt> = l.periods().iter().map(|v| &v[j]).collect();
    let mut constant = d * &l.base()[j];
    let mut coeffs = vec![BigInt::zero(); p];
    for (i, bji) in b.iter().enumerate() {
        constant += *bji * &cs.gamma[i];
        for (k, c) in coeffs.iter_mut().enumerate() {
            *c += *bji * cs.lambda.get(i, k);
        }
    }
    if let Some(k) = skip {
        if !coeffs[k].is_zero() {
            return Err(ElimError::Internal(format!(
                "dropped row {x_j} depends on the counted coordinate"
            )));
        }
    }
    let g = coeffs.iter().fold(constant.gcd(d), |acc, c| acc.gcd(c));
    let rhs = Term::from_parts(
        &constant / &g,
        coeffs
            .iter()
            .zip(core)
            .enumerate()
            .filter(|(k, _)| Some(*k) != skip)
            .map(|(_, (c, v))| (c / &g, v.clone())),
    );
    Ok(Formula::eq(Term::monomial(d / &g, x_j), rhs))
}

/// Plans one simple component whose counted coordinate is the last.
pub fn analyze_component(l: &LinearSetPresentation, names: &[String]) -> Result<ComponentPlan, ElimError> {
    let n = l.dim();
    let counted = n - 1;
    let Some(m) = l.period_matrix() else {
        return Ok(ComponentPlan::Determined(DeterminedPlan {
            selection: None,
            cramer: None,
        }));
    };
    let p = m.cols();
    if let Some(sel) = find_full_rank_submatrix(&m, Some(counted)) {
        let sub = m.select_rows(sel.indices())?;
        let offset: IntVector = sel.indices().iter().map(|&i| l.base()[i].clone()).collect();
        let cs = cramer_solve(&sub, &offset)?;
        return Ok(ComponentPlan::Determined(DeterminedPlan {
            selection: Some(sel),
            cramer: Some(cs),
        }));
    }
    let picked = greedy_independent_rows(&m, std::iter::once(counted).chain(0..counted), p);
    if picked.len() != p || picked[0] != counted {
        return Err(ElimError::Internal("no full-rank core through the counted row".into()));
    }
    let free_rows: Vec<usize> = picked[1..].to_vec();
    let mut core_rows = free_rows.clone();
    core_rows.push(counted);
    let core = m.select_rows(&core_rows)?;
    let offset: IntVector = core_rows.iter().map(|&i| l.base()[i].clone()).collect();
    let cramer = cramer_solve(&core, &offset)?;
    let free_names: Vec<String> = free_rows.iter().map(|&i| names[i].clone()).collect();
    let bounds = classify_bounds(&cramer, &free_names)?;
    let feasible = feasible_cases_by_residue(&cramer)?;
    let dropped_rows = (0..counted).filter(|i| !free_rows.contains(i)).collect();
    Ok(ComponentPlan::Interval(IntervalPlan {
        free_rows,
        dropped_rows,
        cramer,
        bounds,
        feasible,
    }))
}

/// Validates the presentation and options, reorders coordinates so the
/// counted one is last, and plans every component.
pub fn analyze(s: &SemilinearPresentation, opts: &ElimOptions) -> Result<Analysis, ElimError> {
    if !s.asserted_disjoint {
        return Err(ElimError::NotAssertedDisjoint);
    }
    if !s.asserted_simple {
        return Err(ElimError::NotAssertedSimple);
    }
    let n = s.dim();
    let counted = opts.counted.unwrap_or(n - 1);
    if counted >= n {
        return Err(ElimError::CountedOutOfRange { index: counted, dim: n });
    }
    let names = opts.coordinates.clone().unwrap_or_else(|| default_coordinate_names(n));
    if names.len() != n {
        return Err(ElimError::CoordinateCount {
            expected: n,
            found: names.len(),
        });
    }
    let mut seen = BTreeSet::new();
    for v in names.iter().chain(std::iter::once(&opts.count_var)) {
        if !valid_name(v) || !seen.insert(v.clone()) {
            return Err(ElimError::InvalidName(v.clone()));
        }
    }
    let order: Vec<usize> = (0..n).filter(|&i| i != counted).chain(std::iter::once(counted)).collect();
    let coordinates: Vec<String> = order.iter().map(|&i| names[i].clone()).collect();
    let mut components = Vec::with_capacity(s.components().len());
    let mut plans = Vec::with_capacity(s.components().len());
    for (idx, c) in s.components().iter().enumerate() {
        if !check_simple(c) {
            return Err(ElimError::NotSimple(idx));
        }
        let permuted = c.permute_coordinates(&order);
        plans.push(analyze_component(&permuted, &coordinates)?);
        components.push(permuted);
    }
    Ok(Analysis {
        domain: s.domain(),
        coordinates,
        components,
        plans,
    })
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

fn delta_size(modulus: &BigInt, encoding: DeltaEncoding, domain: DomainTag) -> u128 {
    let one = match encoding {
        DeltaEncoding::ResidueSplit => {
            let mm: u128 = modulus.try_into().unwrap_or(u128::MAX >> 70);
            16 + mm * (3 + 4 * mm)
        }
        DeltaEncoding::Quotient => 20,
    };
    match domain {
        DomainTag::Z => one,
        DomainTag::N => 2 * one + 8,
    }
}

impl Analysis {
    /// Approximate node count of the formula [`eliminate`] would build.
    pub fn estimate_nodes(&self, opts: &ElimOptions) -> u128 {
        let n = self.coordinates.len() as u128;
        let mut total = 4 * self.plans.len() as u128;
        for plan in &self.plans {
            match plan {
                ComponentPlan::Determined(_) => total += 12 + 8 * n,
                ComponentPlan::Interval(ip) => {
                    let bc = &ip.bounds;
                    let p = ip.cramer.size() as u128;
                    let sign = 1 + 4 * bc.sign.len() as u128;
                    let chains = 1 + 3 * (bc.upper.len() + bc.lower.len()) as u128;
                    let branches = factorial(bc.upper.len()) * factorial(bc.lower.len());
                    let modulus = &bc.m * &ip.cramer.denom;
                    let delta = delta_size(&modulus, opts.delta, self.domain);
                    total += 10 + 6 * ip.dropped_rows.len() as u128;
                    for fs in ip.feasible.iter().filter(|fs| !fs.is_empty()) {
                        let guard = match opts.guards {
                            GuardEncoding::Enumerated => 1 + fs.len() as u128 * (2 * p),
                            GuardEncoding::Lattice => 1 + 2 * p,
                        };
                        total += if bc.has_both_bounds() {
                            branches * (2 * (guard + sign + chains) + delta + 12)
                        } else {
                            guard + sign + 3
                        };
                    }
                }
            }
        }
        total
    }
}

struct Builder<'a> {
    analysis: &'a Analysis,
    opts: &'a ElimOptions,
    fresh: FreshNames,
}

impl Builder<'_> {
    fn determined(&self, l: &LinearSetPresentation, plan: &DeterminedPlan, y: &str) -> Result<Formula, ElimError> {
        let names = &self.analysis.coordinates;
        let n = names.len();
        let mut parts = Vec::new();
        match (&plan.selection, &plan.cramer) {
            (Some(sel), Some(cs)) => {
                let core: Vec<String> = sel.indices().iter().map(|&i| names[i].clone()).collect();
                for t in integrality_terms(cs, &core) {
                    if !cs.denom.is_one() {
                        parts.push(Formula::cong(t.clone(), 0, cs.denom.clone()));
                    }
                    parts.push(Formula::le(Term::zero(), t));
                }
                for j in (0..n - 1).filter(|&j| !sel.contains(j)) {
                    parts.push(row_relation(l, j, &names[j], cs, &core, None)?);
                }
            }
            _ => {
                for (j, x) in names.iter().enumerate().take(n - 1) {
                    parts.push(Formula::eq(Term::var(x), Term::constant(l.base()[j].clone())));
                }
            }
        }
        let member = Formula::and(parts);
        let yt = Term::var(y);
        Ok(Formula::or([
            Formula::and([member.clone(), Formula::eq(yt.clone(), Term::constant(1))]),
            Formula::and([Formula::not(member), Formula::eq(yt, Term::zero())]),
        ]))
    }

    fn residue_guard(&self, ip: &IntervalPlan, free: &[String], a: usize) -> Formula {
        let cs = &ip.cramer;
        let d = &cs.denom;
        if d.is_one() {
            return Formula::True;
        }
        match self.opts.guards {
            GuardEncoding::Enumerated => Formula::or(ip.feasible[a].iter().map(|f| {
                ResidueCase {
                    f: f.clone(),
                    a: BigInt::from(a),
                }
                .guard(free, d)
            })),
            GuardEncoding::Lattice => {
                let p = cs.size();
                Formula::and((0..p).map(|i| {
                    let t = ip.bounds.s[i].add_constant(&(cs.lambda.get(i, p - 1) * BigInt::from(a)));
                    normalize_for_n(&Formula::cong(t, 0, d.clone()))
                }))
            }
        }
    }

    fn interval(&mut self, l: &LinearSetPresentation, ip: &IntervalPlan, y: &str) -> Result<Formula, ElimError> {
        let names = &self.analysis.coordinates;
        let domain = self.analysis.domain;
        let counted = names.len() - 1;
        let free: Vec<String> = ip.free_rows.iter().map(|&i| names[i].clone()).collect();
        let cs = &ip.cramer;
        let bc = &ip.bounds;
        let mut core = free.clone();
        core.push(names[counted].clone());

        let mut relations = Vec::new();
        for &j in &ip.dropped_rows {
            relations.push(row_relation(l, j, &names[j], cs, &core, Some(cs.size() - 1))?);
        }
        let relations = Formula::and(relations);

        let sign = bc.sign_conditions();
        let mut finite = Vec::new();
        let mut counters: Vec<(String, Formula)> = Vec::new();
        for (a, fs) in ip.feasible.iter().enumerate() {
            if fs.is_empty() {
                continue;
            }
            let guard = self.residue_guard(ip, &free, a);
            if !bc.has_both_bounds() {
                // infinitely many witnesses whenever this class is inhabited
                finite.push(Formula::not(Formula::and([guard, sign.clone()])));
                continue;
            }
            let params = DeltaParams::new(bc.m.clone(), a, cs.denom.clone())?;
            for br in build_permutation_branches(bc, &mut self.fresh)? {
                let active = Formula::and([guard.clone(), sign.clone(), br.lower_chain.clone(), br.upper_chain.clone()]);
                let low = bc.lower_bound(br.tau[0]);
                let high = bc.upper_bound(br.sigma[0]);
                let delta = match domain {
                    DomainTag::Z => build_delta_z(&params, &low, &high, &br.u, self.opts.delta, &mut self.fresh),
                    DomainTag::N => {
                        let (l_pos, l_neg) = low.split_signs();
                        let (h_pos, h_neg) = high.split_signs();
                        build_delta_n(&params, &l_pos, &l_neg, &h_neg, &h_pos, &br.u, self.opts.delta, &mut self.fresh)
                    }
                };
                let ut = Term::var(&br.u);
                let counter = Formula::and([
                    Formula::le(Term::zero(), ut.clone()),
                    Formula::or([
                        Formula::and([active.clone(), delta]),
                        Formula::and([Formula::not(active), Formula::eq(ut, Term::zero())]),
                    ]),
                ]);
                counters.push((br.u, counter));
            }
        }
        let total = counters.iter().fold(Term::zero(), |acc, (u, _)| acc.add(&Term::var(u)));
        let mut body = Formula::eq(Term::var(y), total);
        for (u, counter) in counters.into_iter().rev() {
            body = Formula::exists(u, Formula::and([counter, body]));
        }
        finite.push(body);
        let body = Formula::and(finite);
        if ip.dropped_rows.is_empty() {
            return Ok(body);
        }
        Ok(Formula::or([
            Formula::and([Formula::not(relations.clone()), Formula::eq(Term::var(y), Term::zero())]),
            Formula::and([relations, body]),
        ]))
    }

    fn component_report(&self, l: &LinearSetPresentation, plan: &ComponentPlan, count_vars: usize) -> ComponentReport {
        let names = &self.analysis.coordinates;
        let periods = l.periods().len();
        match plan {
            ComponentPlan::Determined(dp) => {
                let rows: Vec<String> = dp
                    .selection
                    .as_ref()
                    .map(|s| s.indices().iter().map(|&i| names[i].clone()).collect())
                    .unwrap_or_default();
                let (eqs, integ, denom) = match &dp.cramer {
                    Some(cs) => (
                        cramer_equations(cs, &rows),
                        integrality_conditions(cs, &rows).iter().map(print_formula).collect(),
                        cs.denom.clone(),
                    ),
                    None => (Vec::new(), Vec::new(), BigInt::one()),
                };
                let dropped = (0..names.len() - 1)
                    .filter(|i| dp.selection.as_ref().is_none_or(|s| !s.contains(*i)))
                    .map(|i| names[i].clone())
                    .collect();
                ComponentReport {
                    case: EliminationCase::Determined,
                    periods,
                    denom,
                    m: None,
                    solved_rows: rows,
                    dropped_rows: dropped,
                    cramer_equations: eqs,
                    integrality: integ,
                    upper: Vec::new(),
                    lower: Vec::new(),
                    sign: Vec::new(),
                    residue_cases: BigInt::one(),
                    feasible_cases: 1,
                    branches_per_case: 1,
                    count_vars,
                }
            }
            ComponentPlan::Interval(ip) => {
                let mut rows: Vec<String> = ip.free_rows.iter().map(|&i| names[i].clone()).collect();
                rows.push(names[names.len() - 1].clone());
                let bc = &ip.bounds;
                ComponentReport {
                    case: EliminationCase::Interval,
                    periods,
                    denom: ip.cramer.denom.clone(),
                    m: Some(bc.m.clone()),
                    cramer_equations: cramer_equations(&ip.cramer, &rows),
                    integrality: integrality_conditions(&ip.cramer, &rows).iter().map(print_formula).collect(),
                    solved_rows: rows,
                    dropped_rows: ip.dropped_rows.iter().map(|&i| names[i].clone()).collect(),
                    upper: bc.upper.clone(),
                    lower: bc.lower.clone(),
                    sign: bc.sign.clone(),
                    residue_cases: num_traits::pow(ip.cramer.denom.clone(), periods),
                    feasible_cases: ip.feasible.iter().map(Vec::len).sum(),
                    branches_per_case: if bc.has_both_bounds() {
                        (factorial(bc.upper.len()) * factorial(bc.lower.len())) as usize
                    } else {
                        0
                    },
                    count_vars,
                }
            }
        }
    }
}

/// Builds the formula from a finished [`Analysis`].
pub fn eliminate_analyzed(analysis: &Analysis, opts: &ElimOptions) -> Result<EliminationResult, ElimError> {
    let mut avoid: BTreeSet<String> = analysis.coordinates.iter().cloned().collect();
    avoid.insert(opts.count_var.clone());
    let mut b = Builder {
        analysis,
        opts,
        fresh: FreshNames::avoiding(avoid),
    };
    let r = analysis.components.len();
    let ys: Vec<String> = if r == 1 {
        vec![opts.count_var.clone()]
    } else {
        (0..r).map(|_| b.fresh.fresh("y")).collect()
    };
    let mut parts = Vec::with_capacity(r);
    let mut reports = Vec::with_capacity(r);
    for ((l, plan), y) in analysis.components.iter().zip(&analysis.plans).zip(&ys) {
        let f = match plan {
            ComponentPlan::Determined(dp) => b.determined(l, dp, y)?,
            ComponentPlan::Interval(ip) => b.interval(l, ip, y)?,
        };
        let mut u_count = 0;
        f.visit(&mut |g| {
            if let Formula::Exists(v, _) = g {
                if v.starts_with("_u") {
                    u_count += 1;
                }
            }
        });
        reports.push(b.component_report(l, plan, u_count));
        parts.push(f);
    }
    let mut formula = if r == 1 {
        parts.pop().expect("one component")
    } else {
        let total = ys.iter().fold(Term::zero(), |acc, y| acc.add(&Term::var(y)));
        let mut body = Formula::eq(Term::var(&opts.count_var), total);
        for (y, part) in ys.iter().zip(parts).rev() {
            body = Formula::exists(y.clone(), Formula::and([Formula::le(Term::zero(), Term::var(y)), part, body]));
        }
        body
    };
    if analysis.domain == DomainTag::N {
        formula = normalize_for_n(&formula);
    }
    let report = EliminationReport {
        domain: analysis.domain,
        counted: analysis.coordinates.last().expect("dimension at least 1").clone(),
        count_var: opts.count_var.clone(),
        delta: opts.delta,
        guards: opts.guards,
        components: reports,
        node_count: formula.node_count(),
    };
    Ok(EliminationResult {
        formula,
        count_var: opts.count_var.clone(),
        report,
    })
}

/// Eliminates `C x = y . (x ∈ S)` for a presentation asserted disjoint and simple.
pub fn eliminate(s: &SemilinearPresentation, opts: &ElimOptions) -> Result<EliminationResult, ElimError> {
    let analysis = analyze(s, opts)?;
    eliminate_analyzed(&analysis, opts)
}

/// Eliminates the counting quantifier over a single simple linear set.
pub fn eliminate_simple(
    l: &LinearSetPresentation,
    domain: DomainTag,
    opts: &ElimOptions,
) -> Result<EliminationResult, ElimError> {
    if l.domain() != domain {
        return Err(ElimError::DomainMismatch {
            expected: domain,
            found: l.domain(),
        });
    }
    if !check_simple(l) {
        return Err(ElimError::NotSimple(0));
    }
    let s = SemilinearPresentation::new(vec![l.clone()], true, true).expect("one component");
    eliminate(&s, opts)
}

impl fmt::Display for EliminationCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EliminationCase::Determined => write!(f, "case 1 (counted coordinate determined, count 0 or 1)"),
            EliminationCase::Interval => write!(f, "case 2 (interval count)"),
        }
    }
}

impl fmt::Display for DeltaEncoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeltaEncoding::ResidueSplit => "residue",
            DeltaEncoding::Quotient => "quotient",
        })
    }
}

impl fmt::Display for GuardEncoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GuardEncoding::Enumerated => "enumerated",
            GuardEncoding::Lattice => "lattice",
        })
    }
}

fn z_list(ix: &[usize]) -> String {
    if ix.is_empty() {
        "none".into()
    } else {
        ix.iter().map(|i| format!("z{}", i + 1)).collect::<Vec<_>>().join(", ")
    }
}

impl fmt::Display for EliminationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "domain {}, counted coordinate {}, count variable {}",
            self.domain, self.counted, self.count_var
        )?;
        for (i, c) in self.components.iter().enumerate() {
            write!(f, "component {}: {}, p = {}, D = {}", i + 1, c.case, c.periods, c.denom)?;
            if let Some(m) = &c.m {
                write!(f, ", m = {m}")?;
            }
            writeln!(f)?;
            if !c.solved_rows.is_empty() {
                writeln!(f, "  solved rows: {}", c.solved_rows.join(", "))?;
            }
            if !c.dropped_rows.is_empty() {
                writeln!(f, "  relation rows: {}", c.dropped_rows.join(", "))?;
            }
            for e in &c.cramer_equations {
                writeln!(f, "  {e}")?;
            }
            for e in &c.integrality {
                writeln!(f, "  integrality: {e}")?;
            }
            if c.case == EliminationCase::Interval {
                writeln!(
                    f,
                    "  A (upper) = {{{}}}, B (lower) = {{{}}}, E (sign) = {{{}}}",
                    z_list(&c.upper),
                    z_list(&c.lower),
                    z_list(&c.sign)
                )?;
                writeln!(
                    f,
                    "  residue cases: {}, feasible: {}, branches per residue: {}, count variables: {}",
                    c.residue_cases, c.feasible_cases, c.branches_per_case, c.count_vars
                )?;
            }
        }
        write!(
            f,
            "output: {} nodes, delta encoding {}, guards {}",
            self.node_count, self.delta, self.guards
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{satisfying_values, Assignment, Interval};
    use crate::linalg::IntVector;

    fn example() -> SemilinearPresentation {
        let l = LinearSetPresentation::new(
            IntVector::from(vec![0, 0, 0, 0]),
            vec![
                IntVector::from(vec![1, 2, 2, 1]),
                IntVector::from(vec![2, 4, 1, 1]),
                IntVector::from(vec![-1, -2, 0, -1]),
            ],
            DomainTag::Z,
        )
        .unwrap();
        SemilinearPresentation::new(vec![l], true, true).unwrap()
    }

    fn count_of(f: &Formula, asg: &Assignment, domain: DomainTag) -> Vec<BigInt> {
        let sat = satisfying_values(f, "y", asg, domain, &BigInt::from(1u64 << 40), &Interval::new(0, 50)).unwrap();
        sat.values
    }

    #[test]
    fn worked_example_report() {
        let res = eliminate(&example(), &ElimOptions::default()).unwrap();
        let c = &res.report.components[0];
        assert_eq!(c.case, EliminationCase::Interval);
        assert_eq!(c.denom, BigInt::from(2));
        assert_eq!(c.m, Some(BigInt::from(6)));
        assert_eq!(
            c.cramer_equations,
            vec!["2*z1 = -x1 + x3 + x4", "2*z2 = 2*x1 - 2*x4", "2*z3 = x1 + x3 - 3*x4"]
        );
        assert_eq!(c.integrality, vec!["x1 + x3 + x4 == 0 mod 2"]);
        assert_eq!((c.upper.clone(), c.lower.clone()), (vec![1, 2], vec![0]));
        assert_eq!(c.dropped_rows, vec!["x2"]);
        assert!(!res.formula.contains_count_eq());
    }

    fn brute_example(x1: i64, x2: i64, x3: i64) -> i64 {
        let mut hits = BTreeSet::new();
        for z1 in 0..40i64 {
            for z2 in 0..40 {
                for z3 in 0..80 {
                    let x = [z1 + 2 * z2 - z3, 2 * z1 + 4 * z2 - 2 * z3, 2 * z1 + z2, z1 + z2 - z3];
                    if x[..3] == [x1, x2, x3] {
                        hits.insert(x[3]);
                    }
                }
            }
        }
        hits.len() as i64
    }

    #[test]
    fn worked_example_counts() {
        let res = eliminate(&example(), &ElimOptions::default()).unwrap();
        for (x1, x2, x3) in [(4, 8, 3), (4, 7, 3), (1, 2, 9), (0, 0, 0), (-2, -4, 6), (3, 6, 11)] {
            let asg = Assignment::new().with("x1", x1).with("x2", x2).with("x3", x3);
            assert_eq!(
                count_of(&res.formula, &asg, DomainTag::Z),
                vec![BigInt::from(brute_example(x1, x2, x3))],
                "at {x1}, {x2}, {x3}"
            );
        }
    }

    #[test]
    fn singleton_is_case_one() {
        let l = LinearSetPresentation::new(IntVector::from(vec![3, 7]), vec![], DomainTag::Z).unwrap();
        let res = eliminate_simple(&l, DomainTag::Z, &ElimOptions::default()).unwrap();
        assert_eq!(res.report.components[0].case, EliminationCase::Determined);
        assert_eq!(print_formula(&res.formula), "x1 = 3 & y = 1 | !x1 = 3 & y = 0");
    }

    #[test]
    fn unbounded_component_is_false_everywhere() {
        let l = LinearSetPresentation::new(IntVector::from(vec![0]), vec![IntVector::from(vec![1])], DomainTag::Z)
            .unwrap();
        let res = eliminate_simple(&l, DomainTag::Z, &ElimOptions::default()).unwrap();
        assert!(count_of(&res.formula, &Assignment::new(), DomainTag::Z).is_empty());
    }

    #[test]
    fn two_singletons_count_two() {
        let pt = |v: i64| LinearSetPresentation::new(IntVector::from(vec![v]), vec![], DomainTag::Z).unwrap();
        let s = SemilinearPresentation::new(vec![pt(3), pt(7)], true, true).unwrap();
        let res = eliminate(&s, &ElimOptions::default()).unwrap();
        assert_eq!(count_of(&res.formula, &Assignment::new(), DomainTag::Z), vec![BigInt::from(2)]);
    }

    #[test]
    fn contract_errors() {
        let mut s = example();
        s.asserted_disjoint = false;
        assert_eq!(eliminate(&s, &ElimOptions::default()).unwrap_err(), ElimError::NotAssertedDisjoint);
        let l = LinearSetPresentation::new(
            IntVector::from(vec![0, 0]),
            vec![IntVector::from(vec![1, 0]), IntVector::from(vec![2, 0])],
            DomainTag::Z,
        )
        .unwrap();
        let s = SemilinearPresentation::new(vec![l.clone()], true, true).unwrap();
        assert_eq!(eliminate(&s, &ElimOptions::default()).unwrap_err(), ElimError::NotSimple(0));
        assert!(matches!(
            eliminate_simple(&l, DomainTag::N, &ElimOptions::default()),
            Err(ElimError::DomainMismatch { .. })
        ));
        let opts = ElimOptions {
            count_var: "_y".into(),
            ..ElimOptions::default()
        };
        assert!(matches!(eliminate(&example(), &opts), Err(ElimError::InvalidName(_))));
    }

    #[test]
    fn encodings_agree_on_the_example() {
        let base = eliminate(&example(), &ElimOptions::default()).unwrap();
        for (delta, guards) in [
            (DeltaEncoding::Quotient, GuardEncoding::Enumerated),
            (DeltaEncoding::ResidueSplit, GuardEncoding::Lattice),
            (DeltaEncoding::Quotient, GuardEncoding::Lattice),
        ] {
            let opts = ElimOptions {
                delta,
                guards,
                ..ElimOptions::default()
            };
            let other = eliminate(&example(), &opts).unwrap();
            for x1 in -3..=3 {
                for x3 in -3..=3 {
                    let asg = Assignment::new().with("x1", x1).with("x2", 2 * x1).with("x3", x3);
                    assert_eq!(
                        count_of(&base.formula, &asg, DomainTag::Z),
                        count_of(&other.formula, &asg, DomainTag::Z)
                    );
                }
            }
        }
    }
}
