use num_bigint::BigInt;
use num_traits::Signed;

use super::lexer::{tokenize, Tok, Token};
use super::{ParseError, SourceSpan};
use crate::formula::{Assignment, Atom, Formula, Term};

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    text: &'a str,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> PResult<Self> {
        Ok(Parser {
            toks: tokenize(text)?,
            pos: 0,
            text,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError {
            message: format!("unexpected {}", self.peek().describe()),
            span: self.span(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expect(&mut self, t: &Tok) -> PResult<Token> {
        if self.peek() == t {
            Ok(self.bump())
        } else {
            Err(self.error(&[t.symbol()]))
        }
    }

    fn finish(&mut self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error(&["end of input"]))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    fn int(&mut self) -> PResult<BigInt> {
        let neg = self.eat(&Tok::Minus);
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(if neg { -n } else { n })
            }
            _ => Err(self.error(&["integer"])),
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        let mut lhs = self.implication()?;
        while self.eat(&Tok::DArrow) {
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    // Nested connectives that were parenthesized in the source stay nested,
    // so that printing and reparsing reproduces the same tree.
    fn disjunction(&mut self) -> PResult<Formula> {
        let mut parts = vec![self.conjunction()?];
        while self.eat(&Tok::Pipe) {
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().expect("one part")
        } else {
            Formula::Or(parts)
        })
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut parts = vec![self.unary()?];
        while self.eat(&Tok::Amp) {
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().expect("one part")
        } else {
            Formula::And(parts)
        })
    }

    fn unary(&mut self) -> PResult<Formula> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Exists | Tok::Forall => {
                let universal = self.bump().tok == Tok::Forall;
                let v = self.ident()?;
                self.expect(&Tok::Dot)?;
                let body = self.unary()?;
                Ok(if universal {
                    Formula::forall(v, body)
                } else {
                    Formula::exists(v, body)
                })
            }
            Tok::Count => {
                self.bump();
                let counted = self.ident()?;
                self.expect(&Tok::Eq)?;
                let count = self.ident()?;
                self.expect(&Tok::Dot)?;
                let body = self.unary()?;
                Ok(Formula::count_eq(counted, count, body))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(&Tok::RParen)?;
                Ok(f)
            }
            Tok::True => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::Minus | Tok::Int(_) | Tok::Ident(_) => self.atom(),
            _ => Err(self.error(&["formula"])),
        }
    }

    fn atom(&mut self) -> PResult<Formula> {
        let lhs = self.term()?;
        let op = self.peek().clone();
        match op {
            Tok::Le | Tok::Lt | Tok::Eq | Tok::Ge | Tok::Gt => {
                self.bump();
                let rhs = self.term()?;
                Ok(match op {
                    Tok::Le => Formula::le(lhs, rhs),
                    Tok::Lt => Formula::lt(lhs, rhs),
                    Tok::Eq => Formula::eq(lhs, rhs),
                    Tok::Ge => Formula::ge(lhs, rhs),
                    _ => Formula::gt(lhs, rhs),
                })
            }
            Tok::EqEq => {
                self.bump();
                let residue = self.int()?;
                self.expect(&Tok::Mod)?;
                let span = self.span();
                let modulus = self.int()?;
                if !modulus.is_positive() {
                    return Err(ParseError {
                        message: format!("congruence modulus must be positive, found {modulus}"),
                        span: SourceSpan::locate(self.text, span.begin, self.toks[self.pos - 1].span.end),
                        expected: vec!["positive integer".into()],
                    });
                }
                Ok(Formula::Atom(Atom::cong(lhs, residue, modulus)))
            }
            _ => Err(self.error(&["<=", "<", "=", ">=", ">", "=="])),
        }
    }

    fn term(&mut self) -> PResult<Term> {
        let mut negate = self.eat(&Tok::Minus);
        let mut acc = Term::zero();
        loop {
            let part = self.addend()?;
            acc = if negate { acc.sub(&part) } else { acc.add(&part) };
            negate = match self.peek() {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => return Ok(acc),
            };
            self.bump();
        }
    }

    fn addend(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Ident(v) => {
                self.bump();
                Ok(Term::var(v))
            }
            Tok::Int(n) => {
                self.bump();
                if self.eat(&Tok::Star) {
                    let v = self.ident()?;
                    Ok(Term::monomial(n, v))
                } else {
                    Ok(Term::constant(n))
                }
            }
            _ => Err(self.error(&["integer", "identifier"])),
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parses `name=value` pairs separated by commas, e.g. `x1=0,x3=-2`.
/// Empty input is the empty assignment.
pub fn parse_assignment(text: &str) -> Result<Assignment, ParseError> {
    let mut p = Parser::new(text)?;
    let mut asg = Assignment::new();
    if *p.peek() == Tok::Eof {
        return Ok(asg);
    }
    loop {
        let span = p.span();
        let v = p.ident()?;
        p.expect(&Tok::Eq)?;
        let val = p.int()?;
        if asg.insert(v.clone(), val).is_some() {
            return Err(ParseError {
                message: format!("variable `{v}` assigned twice"),
                span,
                expected: Vec::new(),
            });
        }
        if !p.eat(&Tok::Comma) {
            break;
        }
    }
    p.finish()?;
    Ok(asg)
}
