//! Textual multivector format: terms `coef*e{indices}` joined by `+`/`-`,
//! e.g. `0.5 + 1.5*e12 - 2*e3`. Indices are 1-based and ascending; when an
//! index exceeds 9 the indices are separated by underscores (`e1_10`).

use std::fmt;

use super::multivector::{Blade, Multivector, Signature};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Token {
    Number(f64),
    Var(usize),
    Blade(Vec<usize>),
    Star,
    Plus,
    Minus,
    Caret,
    LParen,
    RParen,
}

pub(crate) fn parse_error(position: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        position,
        message: message.into(),
    }
}

/// Splits `text` into tokens tagged with their byte offsets.
pub(crate) fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'*' => out.push((start, Token::Star)),
            b'+' => out.push((start, Token::Plus)),
            b'-' => out.push((start, Token::Minus)),
            b'^' => out.push((start, Token::Caret)),
            b'(' => out.push((start, Token::LParen)),
            b')' => out.push((start, Token::RParen)),
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                // Exponent only when digits follow, so `2*e3` never lexes as a float.
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let lit = &text[start..i];
                let value: f64 = lit
                    .parse()
                    .map_err(|_| parse_error(start, format!("invalid number `{lit}`")))?;
                out.push((start, Token::Number(value)));
                continue;
            }
            b'e' | b'x' => {
                i += 1;
                let body_start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'_') {
                    i += 1;
                }
                let body = &text[body_start..i];
                if body.is_empty() {
                    return Err(parse_error(start, format!("`{}` must be followed by digits", c as char)));
                }
                if c == b'x' {
                    let idx: usize = body
                        .parse()
                        .map_err(|_| parse_error(start, format!("invalid variable `x{body}`")))?;
                    if idx == 0 {
                        return Err(parse_error(start, "variables are numbered from x1"));
                    }
                    out.push((start, Token::Var(idx)));
                } else {
                    out.push((start, Token::Blade(blade_indices(body, start)?)));
                }
                continue;
            }
            other => {
                return Err(parse_error(start, format!("unexpected character `{}`", other as char)));
            }
        }
        i += 1;
    }
    Ok(out)
}

fn blade_indices(body: &str, position: usize) -> Result<Vec<usize>> {
    let parts: Vec<usize> = if body.contains('_') {
        body.split('_')
            .map(|p| p.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| parse_error(position, format!("invalid blade `e{body}`")))?
    } else {
        body.bytes().map(|b| (b - b'0') as usize).collect()
    };
    if parts.windows(2).any(|w| w[0] >= w[1]) || parts.contains(&0) {
        return Err(parse_error(
            position,
            format!("blade `e{body}` must list 1-based indices in ascending order"),
        ));
    }
    Ok(parts)
}

/// Resolves 1-based indices to a blade of `sig`.
pub(crate) fn resolve_blade(sig: Signature, indices: &[usize], position: usize) -> Result<Blade> {
    if let Some(&bad) = indices.iter().find(|&&i| i > sig.dim()) {
        return Err(parse_error(
            position,
            format!("blade index {bad} exceeds dimension {}", sig.dim()),
        ));
    }
    Blade::from_indices(indices).map_err(|_| parse_error(position, "invalid blade"))
}

/// Parses the textual multivector format in the algebra `sig`.
pub fn parse_multivector(sig: Signature, text: &str) -> Result<Multivector> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(parse_error(0, "empty multivector"));
    }
    let mut out = Multivector::zero(sig);
    let mut pos = 0;
    let mut first = true;
    while pos < tokens.len() {
        let mut sign = 1.0;
        match tokens[pos].1 {
            Token::Plus | Token::Minus => {
                if tokens[pos].1 == Token::Minus {
                    sign = -1.0;
                }
                pos += 1;
            }
            _ if !first => {
                return Err(parse_error(tokens[pos].0, "expected `+` or `-` between terms"));
            }
            _ => {}
        }
        first = false;
        let at = tokens.get(pos).map_or(text.len(), |t| t.0);
        let (coef, blade) = match tokens.get(pos).map(|t| &t.1) {
            Some(Token::Number(v)) => {
                pos += 1;
                if matches!(tokens.get(pos), Some((_, Token::Star))) {
                    pos += 1;
                    match tokens.get(pos) {
                        Some((p, Token::Blade(idx))) => {
                            pos += 1;
                            (*v, resolve_blade(sig, idx, *p)?)
                        }
                        _ => return Err(parse_error(at, "expected a blade after `*`")),
                    }
                } else {
                    (*v, Blade::SCALAR)
                }
            }
            Some(Token::Blade(idx)) => {
                pos += 1;
                (1.0, resolve_blade(sig, idx, at)?)
            }
            _ => return Err(parse_error(at, "expected a coefficient or blade")),
        };
        let current = out.coeff(blade);
        out.set_coeff(blade, current + sign * coef);
    }
    Ok(out)
}

fn write_coef(f: &mut fmt::Formatter<'_>, c: f64) -> fmt::Result {
    let a = c.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        write!(f, "{c:e}")
    } else {
        write!(f, "{c}")
    }
}

fn write_blade(f: &mut fmt::Formatter<'_>, blade: Blade) -> fmt::Result {
    let idx = blade.indices();
    if idx.iter().any(|&i| i > 9) {
        let parts: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
        write!(f, "e{}", parts.join("_"))
    } else {
        write!(f, "e")?;
        for i in idx {
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for blade in self.sig().blades_by_grade() {
            let c = self.coeff(blade);
            if c == 0.0 {
                continue;
            }
            if wrote {
                f.write_str(if c.is_sign_negative() { " - " } else { " + " })?;
                write_coef(f, c.abs())?;
            } else {
                write_coef(f, c)?;
            }
            if blade != Blade::SCALAR {
                f.write_str("*")?;
                write_blade(f, blade)?;
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize) -> Signature {
        Signature::euclidean(n).unwrap()
    }

    #[test]
    fn parses_spec_style_text() {
        let s = g(3);
        let m = parse_multivector(s, "1.5*e12 - 2*e3 + 0.5").unwrap();
        assert_eq!(m.coeff(Blade::from_indices(&[1, 2]).unwrap()), 1.5);
        assert_eq!(m.coeff(Blade::vector(3)), -2.0);
        assert_eq!(m.scalar_part(), 0.5);
        assert_eq!(m.to_string(), "0.5 - 2*e3 + 1.5*e12");
    }

    #[test]
    fn implicit_unit_coefficients_and_leading_sign() {
        let s = g(2);
        let m = parse_multivector(s, "-e1 + e12").unwrap();
        assert_eq!(m.coeff(Blade::vector(1)), -1.0);
        assert_eq!(m.coeff(Blade(3)), 1.0);
        assert_eq!(parse_multivector(s, "0").unwrap(), Multivector::zero(s));
        assert_eq!(Multivector::zero(s).to_string(), "0");
    }

    #[test]
    fn float_exponents_are_not_blades() {
        let s = g(3);
        let m = parse_multivector(s, "2e3*e1").unwrap();
        assert_eq!(m.coeff(Blade::vector(1)), 2000.0);
        let tiny = Multivector::from_blade(s, Blade::vector(2), -1.25e-20);
        assert_eq!(tiny.to_string(), "-1.25e-20*e2");
        assert_eq!(parse_multivector(s, &tiny.to_string()).unwrap(), tiny);
    }

    #[test]
    fn large_dimension_uses_separators() {
        let s = g(11);
        let m = Multivector::basis(s, &[1, 10]).unwrap();
        assert_eq!(m.to_string(), "1*e1_10");
        assert_eq!(parse_multivector(s, "1*e1_10").unwrap(), m);
    }

    #[test]
    fn errors_carry_positions() {
        let s = g(2);
        assert!(matches!(parse_multivector(s, "1*e3"), Err(Error::Parse { position: 2, .. })));
        assert!(matches!(parse_multivector(s, "1*e21"), Err(Error::Parse { .. })));
        assert!(matches!(parse_multivector(s, "1 2"), Err(Error::Parse { position: 2, .. })));
        assert!(matches!(parse_multivector(s, "1*"), Err(Error::Parse { .. })));
        assert!(matches!(parse_multivector(s, "1 $"), Err(Error::Parse { position: 2, .. })));
    }
}
