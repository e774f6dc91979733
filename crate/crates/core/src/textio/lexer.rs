use num_bigint::BigInt;

use super::{ParseError, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(BigInt),
    Exists,
    Forall,
    Count,
    True,
    False,
    Mod,
    Le,
    Lt,
    Ge,
    Gt,
    Eq,
    EqEq,
    Plus,
    Minus,
    Star,
    Bang,
    Amp,
    Pipe,
    Arrow,
    DArrow,
    LParen,
    RParen,
    Dot,
    Comma,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(n) => format!("integer `{n}`"),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.symbol()),
        }
    }

    pub(crate) fn symbol(&self) -> &'static str {
        match self {
            Tok::Ident(_) => "identifier",
            Tok::Int(_) => "integer",
            Tok::Exists => "E",
            Tok::Forall => "A",
            Tok::Count => "C",
            Tok::True => "true",
            Tok::False => "false",
            Tok::Mod => "mod",
            Tok::Le => "<=",
            Tok::Lt => "<",
            Tok::Ge => ">=",
            Tok::Gt => ">",
            Tok::Eq => "=",
            Tok::EqEq => "==",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Bang => "!",
            Tok::Amp => "&",
            Tok::Pipe => "|",
            Tok::Arrow => "->",
            Tok::DArrow => "<->",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Dot => ".",
            Tok::Comma => ",",
            Tok::Eof => "end of input",
        }
    }
}

/// Words reserved by the formula syntax.
pub fn is_keyword(s: &str) -> bool {
    matches!(s, "E" | "A" | "C" | "true" | "false" | "mod")
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            Tok::Int(text[start..i].parse().expect("ascii digits"))
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            match &text[start..i] {
                "E" => Tok::Exists,
                "A" => Tok::Forall,
                "C" => Tok::Count,
                "true" => Tok::True,
                "false" => Tok::False,
                "mod" => Tok::Mod,
                s => Tok::Ident(s.to_string()),
            }
        } else {
            let rest = &text[i..];
            let (tok, len) = if rest.starts_with("<->") {
                (Tok::DArrow, 3)
            } else if rest.starts_with("<=") {
                (Tok::Le, 2)
            } else if rest.starts_with(">=") {
                (Tok::Ge, 2)
            } else if rest.starts_with("==") {
                (Tok::EqEq, 2)
            } else if rest.starts_with("->") {
                (Tok::Arrow, 2)
            } else {
                let t = match c {
                    b'<' => Tok::Lt,
                    b'>' => Tok::Gt,
                    b'=' => Tok::Eq,
                    b'+' => Tok::Plus,
                    b'-' => Tok::Minus,
                    b'*' => Tok::Star,
                    b'!' => Tok::Bang,
                    b'&' => Tok::Amp,
                    b'|' => Tok::Pipe,
                    b'(' => Tok::LParen,
                    b')' => Tok::RParen,
                    b'.' => Tok::Dot,
                    b',' => Tok::Comma,
                    _ => {
                        let ch = rest.chars().next().expect("non-empty");
                        return Err(ParseError {
                            message: format!("unexpected character `{ch}`"),
                            span: SourceSpan::locate(text, start, start + ch.len_utf8()),
                            expected: Vec::new(),
                        });
                    }
                };
                (t, 1)
            };
            i += len;
            tok
        };
        out.push(Token {
            tok,
            span: SourceSpan::locate(text, start, i),
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        span: SourceSpan::locate(text, text.len(), text.len()),
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexes_operators_greedily() {
        let toks: Vec<Tok> = tokenize("a<->b<=c<d->e==1").unwrap().into_iter().map(|t| t.tok).collect();
        assert_eq!(
            toks,
            vec![
                Tok::Ident("a".into()),
                Tok::DArrow,
                Tok::Ident("b".into()),
                Tok::Le,
                Tok::Ident("c".into()),
                Tok::Lt,
                Tok::Ident("d".into()),
                Tok::Arrow,
                Tok::Ident("e".into()),
                Tok::EqEq,
                Tok::Int(1.into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn spans_track_lines() {
        let toks = tokenize("x\n  = 1").unwrap();
        assert_eq!((toks[1].span.line, toks[1].span.column), (2, 3));
        let err = tokenize("x ≤ 1").unwrap_err();
        assert_eq!(err.span.begin, 2);
    }
}
