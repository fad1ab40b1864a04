//! Text formats for elements, polynomials and projective points.
//!
//! Elements: integers (prime subfield), `a`, `a^k`, or products such as `2*a^3`.
//! Polynomials: sums of terms `c*x^e` in any order, `-` allowed.
//! Points and lines: `(x:y:z)`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ff::{Elem, Field};
use crate::geometry::Triple;
use crate::poly::Poly;

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// One factor of a term: an element, or a power of x.
enum Factor {
    Elem(Elem),
    XPow(usize),
}

fn parse_factor(field: &Field, tok: &str) -> Result<Factor> {
    let tok = tok.trim();
    let (base, exp) = match tok.split_once('^') {
        Some((b, e)) => (b.trim(), Some(e.trim())),
        None => (tok, None),
    };
    match base {
        "x" => {
            let e = match exp {
                Some(e) => e
                    .parse::<usize>()
                    .map_err(|_| perr(format!("bad exponent in {tok:?}")))?,
                None => 1,
            };
            Ok(Factor::XPow(e))
        }
        "a" => {
            let k = match exp {
                Some(e) => e
                    .parse::<i64>()
                    .map_err(|_| perr(format!("bad exponent in {tok:?}")))?,
                None => 1,
            };
            Ok(Factor::Elem(field.alpha_pow(k)))
        }
        _ => {
            let n = base
                .parse::<i64>()
                .map_err(|_| perr(format!("unrecognised token {tok:?}")))?;
            let c = field.from_int(n);
            let e = match exp {
                Some(e) => e
                    .parse::<i64>()
                    .map_err(|_| perr(format!("bad exponent in {tok:?}")))?,
                None => 1,
            };
            Ok(Factor::Elem(field.pow(c, e)?))
        }
    }
}

/// Splits on `+`/`-` (not after `^`), keeping the sign with each term.
fn signed_terms(text: &str) -> Result<Vec<(bool, String)>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    let mut last = None;
    for ch in text.chars() {
        if (ch == '+' || ch == '-') && last != Some('^') {
            if cur.trim().is_empty() {
                neg ^= ch == '-';
            } else {
                out.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            }
        } else {
            cur.push(ch);
        }
        if !ch.is_whitespace() {
            last = Some(ch);
        }
    }
    if cur.trim().is_empty() {
        return Err(perr(format!("expression {text:?} ends without a term")));
    }
    out.push((neg, cur));
    Ok(out)
}

pub fn parse_elem(field: &Field, text: &str) -> Result<Elem> {
    let mut acc = Elem::ZERO;
    for (neg, term) in signed_terms(text)? {
        let mut v = Elem::ONE;
        for tok in term.split('*') {
            match parse_factor(field, tok)? {
                Factor::Elem(c) => v = field.mul(v, c),
                Factor::XPow(_) => return Err(perr(format!("variable in element {text:?}"))),
            }
        }
        acc = if neg {
            field.sub(acc, v)
        } else {
            field.add(acc, v)
        };
    }
    Ok(acc)
}

pub fn parse_poly(field: &Arc<Field>, text: &str) -> Result<Poly> {
    let mut acc = Poly::zero(field);
    for (neg, term) in signed_terms(text)? {
        let mut c = Elem::ONE;
        let mut e = 0usize;
        for tok in term.split('*') {
            match parse_factor(field, tok)? {
                Factor::Elem(v) => c = field.mul(c, v),
                Factor::XPow(k) => e += k,
            }
        }
        if neg {
            c = field.neg(c);
        }
        acc = &acc + &Poly::monomial(field, c, e);
    }
    Ok(acc)
}

/// Parses `(x:y:z)` and normalizes it.
pub fn parse_triple(field: &Field, text: &str) -> Result<Triple> {
    let inner = text
        .trim()
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| perr(format!("expected (x:y:z), got {text:?}")))?;
    let parts: Vec<&str> = inner.split(':').collect();
    if parts.len() != 3 {
        return Err(perr(format!("expected three coordinates in {text:?}")));
    }
    let c = [
        parse_elem(field, parts[0])?,
        parse_elem(field, parts[1])?,
        parse_elem(field, parts[2])?,
    ];
    Triple::new(field, c)
}

pub fn fmt_triple(field: &Field, t: &Triple) -> String {
    let [x, y, z] = t.coords();
    format!(
        "({}:{}:{})",
        field.fmt_elem(x),
        field.fmt_elem(y),
        field.fmt_elem(z)
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::build_field;

    #[test]
    fn polys_round_trip_through_display() {
        let f = build_field(5, 2, Some(&[2, 4, 1])).unwrap();
        for text in [
            "x^11 - x - a^3",
            "3*x^2 + a^5*x + 1",
            "-x",
            "x^24",
            "0",
            "2 - 2",
        ] {
            let p = parse_poly(&f, text).unwrap();
            assert_eq!(parse_poly(&f, &p.to_string()).unwrap(), p, "{text}");
        }
    }

    #[test]
    fn prime_field_terms() {
        let f = build_field(7, 1, None).unwrap();
        let p = parse_poly(&f, "x^3 - 2*x + 10").unwrap();
        assert_eq!(p, Poly::from_ints(&f, &[3, 5, 0, 1]));
        assert_eq!(parse_elem(&f, "-1").unwrap(), f.from_int(6));
        assert!(parse_poly(&f, "x^").is_err());
        assert!(parse_poly(&f, "y").is_err());
        assert!(parse_poly(&f, "x +").is_err());
    }

    #[test]
    fn element_syntax() {
        let f = build_field(5, 2, Some(&[2, 4, 1])).unwrap();
        assert_eq!(parse_elem(&f, "a^6").unwrap(), f.from_int(2));
        assert_eq!(parse_elem(&f, "a^-6").unwrap(), f.from_int(3));
        assert_eq!(
            parse_elem(&f, "a^2").unwrap(),
            parse_elem(&f, "a + 3").unwrap()
        );
    }

    #[test]
    fn triples() {
        let f = build_field(7, 1, None).unwrap();
        let t = parse_triple(&f, "(2:4:6)").unwrap();
        assert_eq!(fmt_triple(&f, &t), "(1:2:3)");
        assert!(parse_triple(&f, "(0:0:0)").is_err());
        assert!(parse_triple(&f, "1:2:3").is_err());
    }
}
