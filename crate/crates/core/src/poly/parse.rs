//! Text format for polynomials: a sum of terms `[+|-]c*z1^a1*...*zk^ak`.
//!
//! The coefficient may be omitted, factors may come in any order and repeat
//! (`z1*z1` is `z1^2`), whitespace is ignored. A rational function is
//! `poly / poly`, either side optionally in parentheses.

use num_bigint::BigInt;
use num_traits::One;

use super::polynomial::{Exponents, IntPolynomial};
use super::rational::RationalFunction;
use crate::error::{Error, Result};

fn err(message: impl Into<String>) -> Error {
    Error::parse(1, message)
}

type RawTerm = (Vec<(usize, u32)>, BigInt);

fn parse_term(text: &str, negative: bool) -> Result<RawTerm> {
    if text.is_empty() {
        return Err(err("empty term"));
    }
    let mut coeff = if negative { BigInt::from(-1) } else { BigInt::one() };
    let mut vars = Vec::new();
    for factor in text.split('*') {
        if factor.is_empty() {
            return Err(err(format!("empty factor in term {text:?}")));
        }
        if let Some(rest) = factor.strip_prefix('z') {
            let (index, power) = match rest.split_once('^') {
                Some((i, p)) => (i, p.parse::<u32>().map_err(|_| err(format!("bad exponent in {factor:?}")))?),
                None => (rest, 1),
            };
            let index: usize = index.parse().map_err(|_| err(format!("bad variable in {factor:?}")))?;
            if index == 0 {
                return Err(err("variables are numbered from z1"));
            }
            vars.push((index - 1, power));
        } else {
            let c: BigInt = factor.parse().map_err(|_| err(format!("bad factor {factor:?}")))?;
            coeff *= c;
        }
    }
    Ok((vars, coeff))
}

fn parse_raw(text: &str) -> Result<Vec<RawTerm>> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(err("empty polynomial"));
    }
    let mut terms = Vec::new();
    let mut start = 0;
    let mut negative = false;
    let bytes = compact.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if (b == b'+' || b == b'-') && !(i > 0 && bytes[i - 1] == b'^') {
            if i > start {
                terms.push(parse_term(&compact[start..i], negative)?);
            } else if i > 0 {
                return Err(err(format!("dangling sign at column {}", i + 1)));
            }
            negative = b == b'-';
            start = i + 1;
        }
    }
    terms.push(parse_term(&compact[start..], negative)?);
    Ok(terms)
}

fn build(raw: Vec<RawTerm>, nvars: usize) -> Result<IntPolynomial> {
    let mut terms: Vec<(Exponents, BigInt)> = Vec::with_capacity(raw.len());
    for (vars, c) in raw {
        let mut e = vec![0u32; nvars];
        for (i, p) in vars {
            if i >= nvars {
                return Err(err(format!("variable z{} outside z1..z{nvars}", i + 1)));
            }
            e[i] += p;
        }
        terms.push((e, c));
    }
    IntPolynomial::from_terms(nvars, terms)
}

fn max_var(raw: &[RawTerm]) -> usize {
    raw.iter().flat_map(|(v, _)| v.iter().map(|(i, _)| i + 1)).max().unwrap_or(0)
}

/// Parses a polynomial. With `nvars = None` the variable count is the
/// largest index that occurs (at least 1).
pub fn parse_polynomial(text: &str, nvars: Option<usize>) -> Result<IntPolynomial> {
    let raw = parse_raw(text)?;
    let n = nvars.unwrap_or_else(|| max_var(&raw).max(1));
    build(raw, n)
}

fn unwrap_parens(side: &str) -> &str {
    let t = side.trim();
    t.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(t)
}

pub fn parse_rational_function(text: &str, nvars: Option<usize>) -> Result<RationalFunction> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let raw_num = parse_raw(unwrap_parens(num))?;
    let raw_den = den.map(|d| parse_raw(unwrap_parens(d))).transpose()?;
    let n = nvars.unwrap_or_else(|| max_var(&raw_num).max(raw_den.as_deref().map_or(0, max_var)).max(1));
    let p = build(raw_num, n)?;
    let q = match raw_den {
        Some(d) => build(d, n)?,
        None => IntPolynomial::one(n),
    };
    RationalFunction::new(p, q).map_err(|e| err(e.to_string()))
}
