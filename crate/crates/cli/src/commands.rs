use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use presburger_count::elim::{
    analyze, eliminate_analyzed, DeltaEncoding, ElimError, ElimOptions, EliminationResult, GuardEncoding,
};
use presburger_count::formula::{
    count_witnesses, count_witnesses_by, default_margin, evaluate, satisfying_values, Assignment, EvalError, Formula,
    Interval,
};
use presburger_count::linalg::IntVector;
use presburger_count::sets::{
    check_disjoint_in_box, default_coordinate_names, membership, DomainTag, IntBox, SemilinearPresentation,
};
use presburger_count::textio::{
    parse_assignment, parse_formula, parse_presentation, print_formula, print_formula_styled, print_presentation,
    ParseError, Style,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Cli, Command, DeltaArg, Domain, ElimArgs, FormulaInput, GuardArg};

pub const SYNTAX: u8 = 1;
pub const CONTRACT: u8 = 2;
pub const VERIFICATION: u8 = 3;

/// Quantifiers of eliminated formulas are pinned by equations, so a wide
/// bound costs nothing.
const ELIMINATED_QUANT_BOUND: u64 = 1 << 40;

pub struct Output {
    pub stdout: String,
    pub code: u8,
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
    /// Partial standard output, emitted before the diagnostic.
    pub stdout: String,
}

impl Failure {
    fn contract(message: impl Into<String>) -> Self {
        Failure {
            code: CONTRACT,
            message: format!("error: {}", message.into()),
            stdout: String::new(),
        }
    }

    fn syntax(err: &ParseError, origin: &str, source: &str) -> Self {
        let text = source.lines().nth(err.span.line.saturating_sub(1)).unwrap_or("");
        let width = source[err.span.begin.min(source.len())..err.span.end.min(source.len())]
            .chars()
            .take_while(|&c| c != '\n')
            .count()
            .max(1);
        let pad = text.chars().take(err.span.column.saturating_sub(1)).count();
        Failure {
            code: SYNTAX,
            message: format!("error: {origin}: {err}\n  | {text}\n  | {}{}", " ".repeat(pad), "^".repeat(width)),
            stdout: String::new(),
        }
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        Failure::contract(e.to_string())
    }
}

impl From<ElimError> for Failure {
    fn from(e: ElimError) -> Self {
        Failure::contract(e.to_string())
    }
}

pub fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_source(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::contract(format!("cannot read stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::contract(format!("cannot read {}: {e}", path.display())))
}

fn origin_of(path: &Path) -> String {
    if path == Path::new("-") {
        "<stdin>".into()
    } else {
        path.display().to_string()
    }
}

fn read_input(input: &FormulaInput) -> Result<(String, String), Failure> {
    match (&input.expr, &input.file) {
        (Some(e), _) => Ok((e.clone(), "<expression>".into())),
        (None, Some(path)) => Ok((read_source(path)?, origin_of(path))),
        (None, None) => Err(Failure::contract("no input given")),
    }
}

fn load_formula(input: &FormulaInput) -> Result<Formula, Failure> {
    let (text, origin) = read_input(input)?;
    parse_formula(&text).map_err(|e| Failure::syntax(&e, &origin, &text))
}

fn load_assignment(text: &str) -> Result<Assignment, Failure> {
    parse_assignment(text).map_err(|e| Failure::syntax(&e, "--assign", text))
}

fn load_presentation(path: &Path) -> Result<SemilinearPresentation, Failure> {
    let text = read_source(path)?;
    parse_presentation(&text).map_err(|e| Failure::syntax(&e, &origin_of(path), &text))
}

fn domain_tag(d: Domain) -> DomainTag {
    match d {
        Domain::Z => DomainTag::Z,
        Domain::N => DomainTag::N,
    }
}

fn lower_end(domain: DomainTag, radius: u64) -> BigInt {
    match domain {
        DomainTag::Z => -BigInt::from(radius),
        DomainTag::N => BigInt::from(0),
    }
}

fn positive(name: &str, v: u64) -> Result<BigInt, Failure> {
    if v == 0 {
        return Err(Failure::contract(format!("--{name} must be positive")));
    }
    Ok(BigInt::from(v))
}

fn show_assignment(asg: &Assignment) -> String {
    asg.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(", ")
}

pub fn run(cli: &Cli) -> Result<Output, Failure> {
    let stdout = match &cli.command {
        Command::Parse {
            input,
            presentation,
            roundtrip,
            unicode,
        } => cmd_parse(input, *presentation, *roundtrip, *unicode)?,
        Command::Eval {
            input,
            assign,
            domain,
            quant_bound,
        } => {
            let f = load_formula(input)?;
            let asg = load_assignment(assign)?;
            let qb = positive("quant-bound", *quant_bound)?;
            format!("{}\n", evaluate(&f, &asg, domain_tag(*domain), &qb)?)
        }
        Command::Count {
            input,
            var,
            assign,
            domain,
            quant_bound,
            radius,
            margin,
        } => {
            let f = load_formula(input)?;
            let mut asg = load_assignment(assign)?;
            asg.remove(var);
            let domain = domain_tag(*domain);
            let qb = positive("quant-bound", *quant_bound)?;
            let window = Interval::new(lower_end(domain, *radius), BigInt::from(*radius));
            let margin = match margin {
                Some(m) => positive("margin", *m)?,
                None => default_margin(&f),
            };
            let res = count_witnesses(&f, var, &asg, domain, &window, &margin, &qb)?;
            format!("{} {}\n", res.count, if res.stable { "stable" } else { "unstable" })
        }
        Command::Eliminate {
            presentation,
            elim,
            report,
        } => {
            let s = load_presentation(presentation)?;
            let res = run_elimination(&s, elim)?;
            let mut out = format!("{}\n", print_formula(&res.formula));
            if *report {
                let _ = writeln!(out, "\n{}", res.report);
            }
            out
        }
        Command::Check { .. } => return cmd_check(cli),
    };
    Ok(Output { stdout, code: 0 })
}

fn cmd_parse(input: &FormulaInput, presentation: bool, roundtrip: bool, unicode: bool) -> Result<String, Failure> {
    let (text, origin) = read_input(input)?;
    let mismatch = |printed: &str| Failure {
        code: VERIFICATION,
        message: "error: reparsing the printed form gives a different tree".into(),
        stdout: printed.to_string(),
    };
    if presentation {
        let s = parse_presentation(&text).map_err(|e| Failure::syntax(&e, &origin, &text))?;
        let printed = print_presentation(&s);
        if roundtrip && parse_presentation(&printed).ok().as_ref() != Some(&s) {
            return Err(mismatch(&printed));
        }
        return Ok(printed);
    }
    let f = parse_formula(&text).map_err(|e| Failure::syntax(&e, &origin, &text))?;
    let printed = print_formula(&f);
    if roundtrip && parse_formula(&printed).ok().as_ref() != Some(&f) {
        return Err(mismatch(&format!("{printed}\n")));
    }
    let shown = if unicode {
        print_formula_styled(&f, Style::Unicode)
    } else {
        printed
    };
    Ok(format!("{shown}\n"))
}

fn coordinate_names(s: &SemilinearPresentation, elim: &ElimArgs) -> Vec<String> {
    elim.coords.clone().unwrap_or_else(|| default_coordinate_names(s.dim()))
}

fn elim_options(s: &SemilinearPresentation, elim: &ElimArgs) -> Result<ElimOptions, Failure> {
    let names = coordinate_names(s, elim);
    let counted = match &elim.counted {
        None => None,
        Some(c) => Some(
            names
                .iter()
                .position(|n| n == c)
                .ok_or_else(|| Failure::contract(format!("unknown coordinate `{c}`; coordinates are {}", names.join(", "))))?,
        ),
    };
    Ok(ElimOptions {
        counted,
        count_var: elim.count_var.clone(),
        coordinates: Some(names),
        delta: match elim.delta {
            DeltaArg::Residue => DeltaEncoding::ResidueSplit,
            DeltaArg::Quotient => DeltaEncoding::Quotient,
        },
        guards: match elim.guards {
            GuardArg::Enumerated => GuardEncoding::Enumerated,
            GuardArg::Lattice => GuardEncoding::Lattice,
        },
    })
}

fn run_elimination(s: &SemilinearPresentation, elim: &ElimArgs) -> Result<EliminationResult, Failure> {
    let opts = elim_options(s, elim)?;
    let analysis = analyze(s, &opts)?;
    let estimate = analysis.estimate_nodes(&opts);
    if estimate > u128::from(elim.node_budget) {
        return Err(Failure::contract(format!(
            "the output is estimated at {estimate} nodes, over the budget of {}; \
             try --delta quotient --guards lattice or raise --node-budget",
            elim.node_budget
        )));
    }
    Ok(eliminate_analyzed(&analysis, &opts)?)
}

/// A random member of a random component whose free coordinates lie in
/// `[lo, hi]`, if one is found within a few attempts.
fn member_projection(
    s: &SemilinearPresentation,
    counted_ix: usize,
    lo: i64,
    hi: i64,
    rng: &mut ChaCha8Rng,
) -> Option<IntVector> {
    let comps = s.components();
    if comps.is_empty() {
        return None;
    }
    for attempt in 0..16u32 {
        let c = &comps[rng.gen_range(0..comps.len())];
        let top = i64::from(8 >> (attempt / 4));
        let coeffs: Vec<BigInt> = c.periods().iter().map(|_| BigInt::from(rng.gen_range(0..=top))).collect();
        let x = c.point(&coeffs);
        let inside = x
            .iter()
            .enumerate()
            .all(|(j, v)| j == counted_ix || (*v >= BigInt::from(lo) && *v <= BigInt::from(hi)));
        if inside {
            return Some(x);
        }
    }
    None
}

fn cmd_check(cli: &Cli) -> Result<Output, Failure> {
    let Command::Check {
        presentation,
        elim,
        formula,
        trials,
        seed,
        radius,
        window,
        margin,
        quant_bound,
        verify_disjoint,
        disjoint_radius,
        strict,
    } = &cli.command
    else {
        unreachable!("dispatched on Check")
    };
    let s = load_presentation(presentation)?;
    let domain = s.domain();
    let n = s.dim();
    if *verify_disjoint {
        let lo = lower_end(domain, *disjoint_radius).to_i64().expect("fits");
        let hi = i64::try_from(*disjoint_radius).map_err(|_| Failure::contract("--disjoint-radius too large"))?;
        let bx = IntBox::cube(n, lo, hi).map_err(|e| Failure::contract(e.to_string()))?;
        let disjoint = check_disjoint_in_box(&s, &bx).map_err(|e| Failure::contract(e.to_string()))?;
        if !disjoint {
            return Err(Failure::contract(format!(
                "components overlap inside the box [{lo}, {hi}]^{n}"
            )));
        }
    }
    let names = coordinate_names(&s, elim);
    let opts = elim_options(&s, elim)?;
    let counted_ix = opts.counted.unwrap_or(n - 1);
    let counted = names
        .get(counted_ix)
        .cloned()
        .ok_or_else(|| Failure::contract("coordinate names do not match the dimension"))?;
    let count_var = elim.count_var.clone();
    let f = match formula {
        Some(path) => {
            let text = read_source(path)?;
            let f = parse_formula(&text).map_err(|e| Failure::syntax(&e, &origin_of(path), &text))?;
            let allowed: Vec<&String> = names.iter().filter(|v| **v != counted).chain([&count_var]).collect();
            if let Some(v) = f.free_vars().iter().find(|v| !allowed.contains(v)) {
                return Err(Failure::contract(format!("formula has unexpected free variable `{v}`")));
            }
            f
        }
        None => run_elimination(&s, elim)?.formula,
    };
    let radius_b = positive("radius", *radius)?;
    let w = match window {
        Some(w) => positive("window", *w)?,
        None => &radius_b * 4,
    };
    let margin = match margin {
        Some(m) => positive("margin", *m)?,
        None => (&w / BigInt::from(4)).max(BigInt::from(1)),
    };
    let qb = positive("quant-bound", *quant_bound)?.max(BigInt::from(ELIMINATED_QUANT_BOUND));
    let count_window = Interval::new(-w.clone(), w.clone());
    let fallback = Interval::new(0, w.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(*seed);
    let lo = lower_end(domain, *radius).to_i64().expect("fits");
    let hi = i64::try_from(*radius).map_err(|_| Failure::contract("--radius too large"))?;

    let mut out = String::new();
    let _ = writeln!(out, "trial  assignment  oracle  formula  status");
    let (mut agree, mut unstable, mut bad) = (0u32, 0u32, 0u32);
    let mut first_failure: Option<String> = None;
    for trial in 1..=*trials {
        let free = if trial % 2 == 0 { member_projection(&s, counted_ix, lo, hi, &mut rng) } else { None };
        let mut point: Vec<BigInt> = Vec::with_capacity(n);
        let mut asg = Assignment::new();
        for (j, name) in names.iter().enumerate() {
            if j == counted_ix {
                point.push(BigInt::from(0));
            } else {
                let v = match &free {
                    Some(x) => x[j].to_i64().expect("inside the box"),
                    None => rng.gen_range(lo..=hi),
                };
                point.push(BigInt::from(v));
                asg.insert(name.clone(), v);
            }
        }
        let oracle = count_witnesses_by(domain, &count_window, &margin, |v| {
            point[counted_ix] = v.clone();
            let x = IntVector::from(point.clone());
            for c in s.components() {
                if membership(c, &x)? {
                    return Ok(true);
                }
            }
            Ok::<bool, presburger_count::sets::SetsError>(false)
        })
        .map_err(|e| Failure::contract(e.to_string()))?;
        let sat = satisfying_values(&f, &count_var, &asg, domain, &qb, &fallback)?;
        let shown: Vec<String> = sat.values.iter().map(|v| v.to_string()).collect();
        let formula_col = if shown.is_empty() {
            "none".to_string()
        } else {
            format!("{count_var}={}", shown.join("|"))
        };
        let status = if oracle.stable {
            if sat.exhaustive && sat.values == [oracle.count.clone()] {
                agree += 1;
                "ok"
            } else {
                bad += 1;
                "MISMATCH"
            }
        } else if sat.values.is_empty() {
            unstable += 1;
            "unstable"
        } else if *strict {
            bad += 1;
            "MISMATCH (unstable)"
        } else {
            unstable += 1;
            "unstable (formula not false)"
        };
        let oracle_col = format!("{}{}", oracle.count, if oracle.stable { "" } else { "?" });
        let _ = writeln!(out, "{trial:>5}  {}  {oracle_col}  {formula_col}  {status}", show_assignment(&asg));
        if status.starts_with("MISMATCH") && first_failure.is_none() {
            first_failure = Some(format!(
                "trial {trial} at {}: oracle count {}{}, formula gives {formula_col}",
                show_assignment(&asg),
                oracle.count,
                if oracle.stable { "" } else { " (unstable)" }
            ));
        }
    }
    let _ = writeln!(out, "{trials} trials: {agree} agree, {unstable} unstable, {bad} disagree");
    match first_failure {
        Some(msg) => Err(Failure {
            code: VERIFICATION,
            message: format!("error: verification failed: {msg}"),
            stdout: out,
        }),
        None => Ok(Output { stdout: out, code: 0 }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn member_projection_lands_in_a_component() {
        let s = parse_presentation("domain Z\ndim 2\ndisjoint\nsimple\ncomponent\nbase 1 0\nperiod 2 1\n").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let x = member_projection(&s, 1, -20, 20, &mut rng).expect("small coefficients fit");
            assert!(s.contains(&x).unwrap());
            assert!(x[0] >= BigInt::from(-20) && x[0] <= BigInt::from(20));
        }
    }

    #[test]
    fn member_projection_gives_up_outside_the_box() {
        let s = parse_presentation("domain Z\ndim 2\ndisjoint\nsimple\ncomponent\nbase 100 0\nperiod 1 1\n").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(member_projection(&s, 1, -10, 10, &mut rng).is_none());
    }

    #[test]
    fn zero_bounds_are_rejected() {
        assert_eq!(positive("radius", 0).unwrap_err().code, CONTRACT);
        assert_eq!(positive("radius", 3).unwrap(), BigInt::from(3));
        assert_eq!(lower_end(DomainTag::N, 9), BigInt::from(0));
        assert_eq!(lower_end(DomainTag::Z, 9), BigInt::from(-9));
    }
}
