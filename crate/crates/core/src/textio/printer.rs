use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::formula::{Atom, Formula, Term};

/// Output flavor. Only [`Style::Ascii`] output can be parsed back.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Style {
    #[default]
    Ascii,
    Unicode,
}

struct Symbols {
    and: &'static str,
    or: &'static str,
    not: &'static str,
    le: &'static str,
    times: &'static str,
}

const ASCII: Symbols = Symbols {
    and: " & ",
    or: " | ",
    not: "!",
    le: "<=",
    times: "*",
};

const UNICODE: Symbols = Symbols {
    and: " ∧ ",
    or: " ∨ ",
    not: "¬",
    le: "≤",
    times: "·",
};

fn symbols(style: Style) -> &'static Symbols {
    match style {
        Style::Ascii => &ASCII,
        Style::Unicode => &UNICODE,
    }
}

/// Variables in name order, then the constant: `2*x - y + 1`, `-x`, `0`.
pub fn print_term(t: &Term) -> String {
    term_styled(t, Style::Ascii)
}

fn term_styled(t: &Term, style: Style) -> String {
    let sym = symbols(style);
    let mut out = String::new();
    let mut first = true;
    let mut push = |out: &mut String, coeff: &BigInt, body: Option<&str>| {
        let neg = coeff.is_negative();
        match (first, neg) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        first = false;
        let mag = coeff.abs();
        match body {
            Some(v) if mag.is_one() => out.push_str(v),
            Some(v) => {
                let _ = write!(out, "{mag}{}{v}", sym.times);
            }
            None => {
                let _ = write!(out, "{mag}");
            }
        }
    };
    for (v, c) in t.monomials() {
        push(&mut out, c, Some(v));
    }
    let k = t.constant_part();
    if !k.is_zero() || t.is_constant() {
        push(&mut out, k, None);
    }
    out
}

pub fn print_formula(f: &Formula) -> String {
    print_formula_styled(f, Style::Ascii)
}

/// Prints with minimal parentheses. A quantifier body extends over a single
/// unary formula, so conjunctions and disjunctions under a quantifier or a
/// negation are parenthesized.
pub fn print_formula_styled(f: &Formula, style: Style) -> String {
    let mut out = String::new();
    write_formula(&mut out, f, Prec::Or, style);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Or,
    And,
    Unary,
}

fn write_formula(out: &mut String, f: &Formula, ctx: Prec, style: Style) {
    let sym = symbols(style);
    let own = match f {
        Formula::Or(_) => Prec::Or,
        Formula::And(_) => Prec::And,
        _ => Prec::Unary,
    };
    let paren = own < ctx;
    if paren {
        out.push('(');
    }
    match f {
        Formula::True => out.push_str(if style == Style::Unicode { "⊤" } else { "true" }),
        Formula::False => out.push_str(if style == Style::Unicode { "⊥" } else { "false" }),
        Formula::Atom(a) => write_atom(out, a, style),
        Formula::Not(g) => {
            out.push_str(sym.not);
            write_formula(out, g, Prec::Unary, style);
        }
        Formula::And(gs) | Formula::Or(gs) => {
            let (sep, child) = if own == Prec::And {
                (sym.and, Prec::Unary)
            } else {
                (sym.or, Prec::And)
            };
            if gs.is_empty() {
                out.push_str(match (own, style) {
                    (Prec::And, Style::Ascii) => "true",
                    (Prec::And, Style::Unicode) => "⊤",
                    (_, Style::Ascii) => "false",
                    (_, Style::Unicode) => "⊥",
                });
            }
            for (i, g) in gs.iter().enumerate() {
                if i > 0 {
                    out.push_str(sep);
                }
                write_formula(out, g, child, style);
            }
        }
        Formula::Exists(v, body) | Formula::Forall(v, body) => {
            let universal = matches!(f, Formula::Forall(..));
            match (style, universal) {
                (Style::Ascii, false) => {
                    let _ = write!(out, "E {v} . ");
                }
                (Style::Ascii, true) => {
                    let _ = write!(out, "A {v} . ");
                }
                (Style::Unicode, false) => {
                    let _ = write!(out, "∃{v}. ");
                }
                (Style::Unicode, true) => {
                    let _ = write!(out, "∀{v}. ");
                }
            }
            write_formula(out, body, Prec::Unary, style);
        }
        Formula::CountEq { counted, count, body } => {
            match style {
                Style::Ascii => {
                    let _ = write!(out, "C {counted} = {count} . ");
                }
                Style::Unicode => {
                    let _ = write!(out, "∃^{{={count}}}{counted}. ");
                }
            }
            write_formula(out, body, Prec::Unary, style);
        }
    }
    if paren {
        out.push(')');
    }
}

fn write_atom(out: &mut String, a: &Atom, style: Style) {
    let sym = symbols(style);
    let t = |x: &Term| term_styled(x, style);
    let _ = match a {
        Atom::Le(l, r) => write!(out, "{} {} {}", t(l), sym.le, t(r)),
        Atom::Lt(l, r) => write!(out, "{} < {}", t(l), t(r)),
        Atom::Eq(l, r) => write!(out, "{} = {}", t(l), t(r)),
        Atom::Cong {
            term,
            residue,
            modulus,
        } => match style {
            Style::Ascii => write!(out, "{} == {residue} mod {modulus}", t(term)),
            Style::Unicode => write!(out, "{} ≡ {residue} (mod {modulus})", t(term)),
        },
    };
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textio::parse_formula;

    fn roundtrip(s: &str) -> String {
        print_formula(&parse_formula(s).unwrap())
    }

    #[test]
    fn term_forms() {
        let t = Term::from_parts(4, [(BigInt::from(-1), "x"), (BigInt::from(-3), "y")]);
        assert_eq!(print_term(&t), "-x - 3*y + 4");
        assert_eq!(print_term(&Term::zero()), "0");
        assert_eq!(print_term(&Term::constant(-2)), "-2");
        assert_eq!(print_term(&Term::from_parts(1, [(BigInt::from(2), "x")])), "2*x + 1");
    }

    #[test]
    fn printing_examples() {
        let f = Formula::count_eq("x", "y", Formula::eq(Term::var("x"), Term::constant(3)));
        assert_eq!(print_formula(&f), "C x = y . x = 3");
        let a = parse_formula("a = 1").unwrap();
        let b = parse_formula("b = 1").unwrap();
        let c = parse_formula("c = 1").unwrap();
        let nested = Formula::and([a, Formula::and([b, c])]);
        assert_eq!(print_formula(&nested), "a = 1 & b = 1 & c = 1");
        let cong = Formula::cong(Term::from_parts(1, [(BigInt::from(2), "x")]), 0, 3);
        assert_eq!(print_formula(&cong), "2*x + 1 == 0 mod 3");
    }

    #[test]
    fn minimal_parentheses() {
        assert_eq!(roundtrip("((x = 1) & ((y = 2)))"), "x = 1 & y = 2");
        assert_eq!(roundtrip("(x = 1 | y = 2) & z = 3"), "(x = 1 | y = 2) & z = 3");
        assert_eq!(roundtrip("!(x = 1 & y = 2)"), "!(x = 1 & y = 2)");
        assert_eq!(roundtrip("E x . (x = 1 & y = 2)"), "E x . (x = 1 & y = 2)");
        assert_eq!(roundtrip("(E x . x = 1) & y = 2"), "E x . x = 1 & y = 2");
        assert_eq!(roundtrip("x >= 2"), "2 <= x");
        assert_eq!(roundtrip("x == -1 mod 3"), "x == 2 mod 3");
    }

    #[test]
    fn unicode_display() {
        let f = parse_formula("C x = y . (-1 <= x & !x == 0 mod 2)").unwrap();
        assert_eq!(
            print_formula_styled(&f, Style::Unicode),
            "∃^{=y}x. (-1 ≤ x ∧ ¬x ≡ 0 (mod 2))"
        );
    }
}
