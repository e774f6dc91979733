//! Presentation files:
//!
//! ```text
//! domain Z          # or N
//! dim 4
//! disjoint          # optional assertion
//! simple            # optional assertion
//! component
//! base 0 0 0 0
//! period 1 2 2 1
//! period 2 4 1 1
//! ```
//!
//! Header lines come before the first `component`. A component without
//! `period` lines is the single point `base`.

use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::Signed;

use super::{ParseError, SourceSpan};
use crate::linalg::IntVector;
use crate::sets::{DomainTag, LinearSetPresentation, SemilinearPresentation};

struct Line<'a> {
    text: &'a str,
    /// Byte offset of `text` in the whole input.
    offset: usize,
}

impl Line<'_> {
    fn words(&self) -> impl Iterator<Item = (usize, &str)> {
        let base = self.text.as_ptr() as usize;
        self.text
            .split_ascii_whitespace()
            .map(move |w| (w.as_ptr() as usize - base, w))
    }
}

struct ComponentDraft {
    line: SourceSpan,
    base: Option<IntVector>,
    periods: Vec<IntVector>,
}

pub fn parse_presentation(text: &str) -> Result<SemilinearPresentation, ParseError> {
    let err = |begin: usize, end: usize, message: String, expected: &[&str]| ParseError {
        message,
        span: SourceSpan::locate(text, begin, end),
        expected: expected.iter().map(|s| s.to_string()).collect(),
    };

    let mut domain: Option<DomainTag> = None;
    let mut dim: Option<usize> = None;
    let mut disjoint = false;
    let mut simple = false;
    let mut comps: Vec<ComponentDraft> = Vec::new();

    let mut offset = 0;
    for raw in text.split_inclusive('\n') {
        let content = raw.split('#').next().unwrap_or("");
        let line = Line { text: content, offset };
        offset += raw.len();

        let words: Vec<(usize, &str)> = line.words().map(|(o, w)| (o + line.offset, w)).collect();
        let Some(&(kw_at, kw)) = words.first() else {
            continue;
        };
        let kw_end = kw_at + kw.len();
        let args = &words[1..];
        let no_args = |what: &str| -> Result<(), ParseError> {
            match args.first() {
                Some(&(at, w)) => Err(err(at, at + w.len(), format!("unexpected argument to `{what}`"), &["end of line"])),
                None => Ok(()),
            }
        };
        let header_ok = |what: &str| -> Result<(), ParseError> {
            if comps.is_empty() {
                Ok(())
            } else {
                Err(err(kw_at, kw_end, format!("`{what}` must precede the first component"), &[]))
            }
        };

        match kw {
            "domain" => {
                header_ok(kw)?;
                if domain.is_some() {
                    return Err(err(kw_at, kw_end, "duplicate `domain` line".into(), &[]));
                }
                let Some(&(at, w)) = args.first() else {
                    return Err(err(kw_end, kw_end, "missing domain".into(), &["Z", "N"]));
                };
                domain = Some(
                    w.parse()
                        .map_err(|_| err(at, at + w.len(), format!("unknown domain `{w}`"), &["Z", "N"]))?,
                );
                if let Some(&(at, w)) = args.get(1) {
                    return Err(err(at, at + w.len(), "unexpected argument to `domain`".into(), &["end of line"]));
                }
            }
            "dim" => {
                header_ok(kw)?;
                if dim.is_some() {
                    return Err(err(kw_at, kw_end, "duplicate `dim` line".into(), &[]));
                }
                let Some(&(at, w)) = args.first() else {
                    return Err(err(kw_end, kw_end, "missing dimension".into(), &["positive integer"]));
                };
                match w.parse::<usize>() {
                    Ok(n) if n >= 1 => dim = Some(n),
                    _ => {
                        return Err(err(at, at + w.len(), format!("invalid dimension `{w}`"), &["positive integer"]))
                    }
                }
                if let Some(&(at, w)) = args.get(1) {
                    return Err(err(at, at + w.len(), "unexpected argument to `dim`".into(), &["end of line"]));
                }
            }
            "disjoint" => {
                header_ok(kw)?;
                no_args(kw)?;
                disjoint = true;
            }
            "simple" => {
                header_ok(kw)?;
                no_args(kw)?;
                simple = true;
            }
            "component" => {
                no_args(kw)?;
                if domain.is_none() || dim.is_none() {
                    return Err(err(kw_at, kw_end, "`domain` and `dim` must precede the first component".into(), &[]));
                }
                comps.push(ComponentDraft {
                    line: SourceSpan::locate(text, kw_at, kw_end),
                    base: None,
                    periods: Vec::new(),
                });
            }
            "base" | "period" => {
                let (Some(n), Some(dom)) = (dim, domain) else {
                    return Err(err(kw_at, kw_end, format!("`{kw}` before the header is complete"), &["domain", "dim"]));
                };
                let Some(current) = comps.last_mut() else {
                    return Err(err(kw_at, kw_end, format!("`{kw}` outside a component"), &["component"]));
                };
                let mut entries = Vec::with_capacity(n);
                for &(at, w) in args {
                    let v: BigInt = w
                        .parse()
                        .map_err(|_| err(at, at + w.len(), format!("invalid integer `{w}`"), &["integer"]))?;
                    if dom == DomainTag::N && v.is_negative() {
                        return Err(err(at, at + w.len(), format!("negative entry {v} in a presentation over N"), &[]));
                    }
                    entries.push(v);
                }
                if entries.len() != n {
                    let end = args.last().map_or(kw_end, |&(at, w)| at + w.len());
                    return Err(err(kw_at, end, format!("expected {n} entries, found {}", entries.len()), &[]));
                }
                let v = IntVector::from(entries);
                if kw == "base" {
                    if current.base.is_some() {
                        return Err(err(kw_at, kw_end, "duplicate `base` line".into(), &[]));
                    }
                    current.base = Some(v);
                } else {
                    current.periods.push(v);
                }
            }
            other => {
                return Err(err(
                    kw_at,
                    kw_end,
                    format!("unknown keyword `{other}`"),
                    &["domain", "dim", "disjoint", "simple", "component", "base", "period"],
                ))
            }
        }
    }

    let end_span = SourceSpan::locate(text, text.len(), text.len());
    let Some(domain) = domain else {
        return Err(ParseError {
            message: "missing `domain` line".into(),
            span: end_span,
            expected: vec!["domain".into()],
        });
    };
    if comps.is_empty() {
        return Err(ParseError {
            message: "presentation has no components".into(),
            span: end_span,
            expected: vec!["component".into()],
        });
    }
    let mut linear = Vec::with_capacity(comps.len());
    for c in comps {
        let Some(base) = c.base else {
            return Err(ParseError {
                message: "component has no `base` line".into(),
                span: c.line,
                expected: vec!["base".into()],
            });
        };
        let l = LinearSetPresentation::new(base, c.periods, domain).map_err(|e| ParseError {
            message: e.to_string(),
            span: c.line,
            expected: Vec::new(),
        })?;
        linear.push(l);
    }
    SemilinearPresentation::new(linear, disjoint, simple).map_err(|e| ParseError {
        message: e.to_string(),
        span: end_span,
        expected: Vec::new(),
    })
}

pub fn print_presentation(s: &SemilinearPresentation) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "domain {}", s.domain());
    let _ = writeln!(out, "dim {}", s.dim());
    if s.asserted_disjoint {
        out.push_str("disjoint\n");
    }
    if s.asserted_simple {
        out.push_str("simple\n");
    }
    let row = |v: &IntVector| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    for c in s.components() {
        out.push_str("component\n");
        let _ = writeln!(out, "base {}", row(c.base()));
        for p in c.periods() {
            let _ = writeln!(out, "period {}", row(p));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::check_simple;

    const EXAMPLE: &str = "\
# the worked example
domain Z
dim 4
disjoint
simple
component
base 0 0 0 0
period 1 2 2 1
period 2 4 1 1
period -1 -2 0 -1
";

    #[test]
    fn parses_the_worked_example() {
        let s = parse_presentation(EXAMPLE).unwrap();
        assert_eq!(s.dim(), 4);
        assert_eq!(s.components().len(), 1);
        assert!(check_simple(&s.components()[0]));
        assert!(s.asserted_disjoint && s.asserted_simple);
        assert_eq!(parse_presentation(&print_presentation(&s)).unwrap(), s);
    }

    #[test]
    fn negative_entries_rejected_over_n() {
        let text = "domain N\ndim 2\ncomponent\nbase 0 0\nperiod 0 -1\n";
        let err = parse_presentation(text).unwrap_err();
        assert_eq!(err.span.line, 5);
        assert_eq!(&text[err.span.begin..err.span.end], "-1");
    }

    #[test]
    fn singleton_component() {
        let s = parse_presentation("domain Z\ndim 1\ncomponent\nbase 7\n").unwrap();
        assert!(s.components()[0].periods().is_empty());
        assert_eq!(print_presentation(&s), "domain Z\ndim 1\ncomponent\nbase 7\n");
    }

    #[test]
    fn structural_errors_carry_line_numbers() {
        let cases = [
            ("domain Z\ndim 2\ncomponent\nbase 1 2 3\n", 4),
            ("domain Z\ndim 2\nfrobnicate\n", 3),
            ("domain Q\n", 1),
            ("domain Z\ndim 2\ncomponent\nperiod 1 1\n", 3),
            ("dim 1\ncomponent\n", 2),
            ("domain Z\ndim 1\ncomponent\nbase 0\nsimple\n", 5),
        ];
        for (text, line) in cases {
            let err = parse_presentation(text).unwrap_err();
            assert_eq!(err.span.line, line, "{text:?}: {err}");
        }
    }

    #[test]
    fn component_order_preserved() {
        let text = "domain Z\ndim 1\ndisjoint\ncomponent\nbase 3\ncomponent\nbase 7\n";
        let s = parse_presentation(text).unwrap();
        assert_eq!(print_presentation(&s), text);
    }
}
