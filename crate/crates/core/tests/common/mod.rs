//! Random presentations and a machine-integer membership oracle shared by the
//! integration tests. Membership is decided by brute Cramer solving in `i128`,
//! independently of the library's exact linear algebra.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use presburger_count::elim::{analyze, eliminate_analyzed, DeltaEncoding, ElimOptions, GuardEncoding};
use presburger_count::formula::{count_witnesses_by, satisfying_values, Assignment, Formula, Interval};
use presburger_count::linalg::IntVector;
use presburger_count::sets::{DomainTag, LinearSetPresentation, SemilinearPresentation};
use rand::Rng;

fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| *v).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

/// `adj(m)` with `m · adj(m) = det(m) · I`.
fn adjugate(m: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![1]];
    }
    let mut adj = vec![vec![0; n]; n];
    for (i, row) in adj.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            // cofactor C_{j,i}
            let minor: Vec<Vec<i128>> = m
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != j)
                .map(|(_, row)| row.iter().enumerate().filter(|(c, _)| *c != i).map(|(_, v)| *v).collect())
                .collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            *entry = sign * det(&minor);
        }
    }
    adj
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// A simple linear set with its membership test precomputed.
#[derive(Debug, Clone)]
pub struct Component {
    pub base: Vec<i64>,
    pub periods: Vec<Vec<i64>>,
    rows: Vec<usize>,
    det: i128,
    adj: Vec<Vec<i128>>,
}

impl Component {
    /// `None` when the periods are linearly dependent.
    pub fn new(base: Vec<i64>, periods: Vec<Vec<i64>>) -> Option<Self> {
        let n = base.len();
        let p = periods.len();
        for rows in subsets(n, p) {
            let sub: Vec<Vec<i128>> = rows.iter().map(|&r| periods.iter().map(|b| b[r] as i128).collect()).collect();
            let d = det(&sub);
            if d != 0 {
                return Some(Component {
                    adj: if p == 0 { vec![] } else { adjugate(&sub) },
                    base,
                    periods,
                    rows,
                    det: d,
                });
            }
        }
        None
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    pub fn point(&self, z: &[i64]) -> Vec<i64> {
        (0..self.dim())
            .map(|j| self.base[j] + self.periods.iter().zip(z).map(|(b, c)| b[j] * c).sum::<i64>())
            .collect()
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        let p = self.periods.len();
        let mut z = Vec::with_capacity(p);
        for i in 0..p {
            let num: i128 = (0..p)
                .map(|k| self.adj[i][k] * (x[self.rows[k]] as i128 - self.base[self.rows[k]] as i128))
                .sum();
            if num % self.det != 0 {
                return false;
            }
            let zi = num / self.det;
            if zi < 0 {
                return false;
            }
            z.push(zi);
        }
        (0..self.dim()).all(|j| {
            let v: i128 =
                self.base[j] as i128 + self.periods.iter().zip(&z).map(|(b, c)| b[j] as i128 * c).sum::<i128>();
            v == x[j] as i128
        })
    }

    pub fn presentation(&self, domain: DomainTag) -> LinearSetPresentation {
        LinearSetPresentation::new(
            IntVector::from(self.base.clone()),
            self.periods.iter().map(|b| IntVector::from(b.clone())).collect(),
            domain,
        )
        .expect("valid component")
    }
}

#[derive(Debug, Clone)]
pub struct Sample {
    pub domain: DomainTag,
    pub components: Vec<Component>,
    pub counted: usize,
}

impl Sample {
    pub fn dim(&self) -> usize {
        self.components[0].dim()
    }

    pub fn presentation(&self) -> SemilinearPresentation {
        SemilinearPresentation::new(
            self.components.iter().map(|c| c.presentation(self.domain)).collect(),
            true,
            true,
        )
        .expect("consistent components")
    }

    /// `n ≤ 3`, at most two components, entries in `[−3, 3]` (`[0, 3]` over ℕ)
    /// and bases in `[−5, 5]` (`[0, 5]` over ℕ).
    pub fn random(rng: &mut impl Rng, domain: DomainTag) -> Sample {
        let (entries, bases) = match domain {
            DomainTag::Z => ((-3, 3), (-5, 5)),
            DomainTag::N => ((0, 3), (0, 5)),
        };
        loop {
            let n = rng.gen_range(1..=3);
            let r = rng.gen_range(1..=2);
            let components: Option<Vec<Component>> = (0..r)
                .map(|_| {
                    let p = rng.gen_range(0..=n);
                    let base = (0..n).map(|_| rng.gen_range(bases.0..=bases.1)).collect();
                    let periods = (0..p)
                        .map(|_| (0..n).map(|_| rng.gen_range(entries.0..=entries.1)).collect())
                        .collect();
                    Component::new(base, periods)
                })
                .collect();
            let Some(components) = components else { continue };
            let sample = Sample {
                domain,
                counted: rng.gen_range(0..n),
                components,
            };
            if sample.probably_disjoint(rng) {
                return sample;
            }
        }
    }

    /// Rejects presentations where a sampled point of one component lies in another.
    fn probably_disjoint(&self, rng: &mut impl Rng) -> bool {
        for (i, c) in self.components.iter().enumerate() {
            for t in 0..300 {
                let z: Vec<i64> = if t == 0 {
                    vec![0; c.periods.len()]
                } else {
                    (0..c.periods.len()).map(|_| rng.gen_range(0..=8)).collect()
                };
                let x = c.point(&z);
                if self.components.iter().enumerate().any(|(j, d)| j != i && d.contains(&x)) {
                    return false;
                }
            }
        }
        true
    }

    /// A point whose free coordinates lie in the box of the given radius; half
    /// of the time taken from a member of the set.
    pub fn random_point(&self, rng: &mut impl Rng, radius: i64) -> Vec<i64> {
        let lo = if self.domain == DomainTag::N { 0 } else { -radius };
        if rng.gen_bool(0.5) {
            let c = &self.components[rng.gen_range(0..self.components.len())];
            let z: Vec<i64> = (0..c.periods.len()).map(|_| rng.gen_range(0..=8)).collect();
            let x = c.point(&z);
            if x.iter().enumerate().all(|(j, v)| j == self.counted || (lo..=radius).contains(v)) {
                return x;
            }
        }
        (0..self.dim()).map(|_| rng.gen_range(lo..=radius)).collect()
    }

    pub fn names(&self) -> Vec<String> {
        (1..=self.dim()).map(|i| format!("x{i}")).collect()
    }

    pub fn assignment(&self, x: &[i64]) -> Assignment {
        let names = self.names();
        let mut asg = Assignment::new();
        for (j, v) in x.iter().enumerate() {
            if j != self.counted {
                asg.insert(names[j].clone(), *v);
            }
        }
        asg
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleCount {
    pub count: i64,
    pub stable: bool,
    pub overlap: bool,
    pub max_abs_witness: i64,
}

/// Witness count for the counted coordinate with the others fixed as in `x`.
pub fn oracle_count(sample: &Sample, x: &[i64], window: i64, margin: i64) -> OracleCount {
    let lo = if sample.domain == DomainTag::N { 0 } else { -window };
    let mut point = x.to_vec();
    let mut overlap = false;
    let mut max_abs = 0;
    let res = count_witnesses_by::<()>(
        sample.domain,
        &Interval::new(lo, window),
        &BigInt::from(margin),
        |v| {
            point[sample.counted] = v.to_i64().expect("window fits");
            let hits = sample.components.iter().filter(|c| c.contains(&point)).count();
            overlap |= hits > 1;
            if hits > 0 {
                max_abs = max_abs.max(point[sample.counted].abs());
            }
            Ok(hits > 0)
        },
    )
    .expect("infallible predicate");
    OracleCount {
        count: res.count.to_i64().expect("small count"),
        stable: res.stable,
        overlap,
        max_abs_witness: max_abs,
    }
}

#[derive(Debug, Default, Clone)]
pub struct CheckStats {
    pub points: usize,
    pub stable: usize,
    pub unstable: usize,
    pub positive: usize,
    pub max_abs_witness: i64,
    pub fallback_encodings: usize,
    pub max_nodes: usize,
}

impl CheckStats {
    pub fn absorb(&mut self, other: &CheckStats) {
        self.points += other.points;
        self.stable += other.stable;
        self.unstable += other.unstable;
        self.positive += other.positive;
        self.max_abs_witness = self.max_abs_witness.max(other.max_abs_witness);
        self.fallback_encodings += other.fallback_encodings;
        self.max_nodes = self.max_nodes.max(other.max_nodes);
    }
}

pub enum Verdict {
    Agree(CheckStats, Formula),
    /// Two components share a tested point; the sample is discarded.
    Overlap,
    Mismatch(String),
}

/// Node estimate above which the compact encodings are used.
pub const NODE_LIMIT: u128 = 250_000;
pub const WINDOW: i64 = 6000;
pub const MARGIN: i64 = 1500;

pub fn quant_bound() -> BigInt {
    BigInt::from(1u64 << 40)
}

/// Eliminates `sample` and compares the result with the oracle at `points`
/// random assignments in the box of the given radius.
pub fn check_sample(sample: &Sample, rng: &mut impl Rng, points: usize, radius: i64) -> Verdict {
    let s = sample.presentation();
    let mut opts = ElimOptions {
        counted: Some(sample.counted),
        ..ElimOptions::default()
    };
    let analysis = match analyze(&s, &opts) {
        Ok(a) => a,
        Err(e) => return Verdict::Mismatch(format!("analysis failed: {e}")),
    };
    let mut stats = CheckStats::default();
    if analysis.estimate_nodes(&opts) > NODE_LIMIT {
        opts.delta = DeltaEncoding::Quotient;
        opts.guards = GuardEncoding::Lattice;
        stats.fallback_encodings = 1;
    }
    let result = match eliminate_analyzed(&analysis, &opts) {
        Ok(r) => r,
        Err(e) => return Verdict::Mismatch(format!("elimination failed: {e}")),
    };
    stats.max_nodes = result.report.node_count;
    let fallback = Interval::new(0, 60);
    for _ in 0..points {
        let x = sample.random_point(rng, radius);
        let oracle = oracle_count(sample, &x, WINDOW, MARGIN);
        if oracle.overlap {
            return Verdict::Overlap;
        }
        let asg = sample.assignment(&x);
        let sat = match satisfying_values(&result.formula, "y", &asg, sample.domain, &quant_bound(), &fallback) {
            Ok(s) => s,
            Err(e) => return Verdict::Mismatch(format!("evaluation failed at {x:?}: {e}")),
        };
        stats.points += 1;
        if oracle.stable {
            stats.stable += 1;
            stats.positive += usize::from(oracle.count > 0);
            stats.max_abs_witness = stats.max_abs_witness.max(oracle.max_abs_witness);
            if !sat.exhaustive || sat.values != vec![BigInt::from(oracle.count)] {
                return Verdict::Mismatch(format!(
                    "{sample:?} at {x:?}: oracle count {}, formula satisfied by y in {:?} (exhaustive: {})",
                    oracle.count, sat.values, sat.exhaustive
                ));
            }
        } else {
            stats.unstable += 1;
            if !sat.values.is_empty() {
                return Verdict::Mismatch(format!(
                    "{sample:?} at {x:?}: oracle unstable, formula satisfied by y in {:?}",
                    sat.values
                ));
            }
        }
    }
    Verdict::Agree(stats, result.formula)
}

const NAMES: [&str; 6] = ["x", "y", "z", "w", "x1", "t_2"];

pub fn random_term(rng: &mut impl Rng) -> presburger_count::formula::Term {
    let k = rng.gen_range(0..=3);
    let parts: Vec<(BigInt, String)> = (0..k)
        .map(|_| (BigInt::from(rng.gen_range(-5..=5)), NAMES[rng.gen_range(0..NAMES.len())].to_string()))
        .collect();
    presburger_count::formula::Term::from_parts(rng.gen_range(-9..=9), parts)
}

/// Arbitrary formula trees; connectives always have at least two children.
pub fn random_formula(rng: &mut impl Rng, depth: u32) -> Formula {
    use presburger_count::formula::Atom;
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return match rng.gen_range(0..6) {
            0 => Formula::True,
            1 => Formula::False,
            2 => Formula::Atom(Atom::Le(random_term(rng), random_term(rng))),
            3 => Formula::Atom(Atom::Lt(random_term(rng), random_term(rng))),
            4 => Formula::Atom(Atom::Eq(random_term(rng), random_term(rng))),
            _ => Formula::Atom(Atom::cong(random_term(rng), rng.gen_range(-9..=9), rng.gen_range(1..=7))),
        };
    }
    let var = |rng: &mut dyn rand::RngCore| NAMES[rng.gen_range(0..NAMES.len())].to_string();
    match rng.gen_range(0..6) {
        0 => Formula::Not(Box::new(random_formula(rng, depth - 1))),
        1 => Formula::And((0..rng.gen_range(2..=4)).map(|_| random_formula(rng, depth - 1)).collect()),
        2 => Formula::Or((0..rng.gen_range(2..=4)).map(|_| random_formula(rng, depth - 1)).collect()),
        3 => Formula::Exists(var(rng), Box::new(random_formula(rng, depth - 1))),
        4 => Formula::Forall(var(rng), Box::new(random_formula(rng, depth - 1))),
        _ => Formula::CountEq {
            counted: var(rng),
            count: var(rng),
            body: Box::new(random_formula(rng, depth - 1)),
        },
    }
}

/// Arbitrary presentations, not necessarily simple or disjoint.
pub fn random_any_presentation(rng: &mut impl Rng) -> SemilinearPresentation {
    let domain = if rng.gen_bool(0.5) { DomainTag::Z } else { DomainTag::N };
    let lo = if domain == DomainTag::N { 0 } else { -9 };
    let n = rng.gen_range(1..=4);
    let comps = (0..rng.gen_range(1..=3))
        .map(|_| {
            let base = IntVector::from((0..n).map(|_| rng.gen_range(lo..=9)).collect::<Vec<i64>>());
            let periods = (0..rng.gen_range(0..=3))
                .map(|_| IntVector::from((0..n).map(|_| rng.gen_range(lo..=9)).collect::<Vec<i64>>()))
                .collect();
            LinearSetPresentation::new(base, periods, domain).expect("in range")
        })
        .collect();
    SemilinearPresentation::new(comps, rng.gen_bool(0.5), rng.gen_bool(0.5)).expect("consistent")
}
