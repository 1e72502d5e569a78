//! Shared helpers for the line-oriented text formats.

use crate::artin::split_signed_terms;
use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::scalar::{format_q, parse_q, Q};
use num_traits::{One, Zero};

/// Strips a trailing `#` comment and surrounding whitespace.
pub fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => line[..i].trim(),
        None => line.trim(),
    }
}

/// Parses `2*x - 1/2*y + z` over the names accepted by `lookup`.
pub fn parse_combination(s: &str, dim: usize, lookup: impl Fn(&str) -> Option<usize>) -> Result<Vector> {
    let mut v = vec![Q::zero(); dim];
    for (sign, term) in split_signed_terms(s)? {
        let mut coeff = Q::one();
        let mut target = None;
        for f in term.split('*').map(str::trim) {
            if let Some(c) = parse_q(f) {
                coeff *= c;
            } else if let Some(i) = lookup(f) {
                if target.replace(i).is_some() {
                    return Err(Error::Parse(format!("term `{term}` names two basis elements")));
                }
            } else {
                return Err(Error::Parse(format!("unknown basis element `{f}`")));
            }
        }
        let i = target.ok_or_else(|| Error::Parse(format!("term `{term}` has no basis element")))?;
        if sign < 0 {
            coeff = -coeff;
        }
        v[i] += coeff;
    }
    Ok(v)
}

/// Formats a vector as a combination of named basis elements.
pub fn format_combination(v: &[Q], name: impl Fn(usize) -> String) -> String {
    let mut out = String::new();
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c < &Q::zero();
        let abs = if neg { -c.clone() } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !abs.is_one() {
            out.push_str(&format_q(&abs));
            out.push('*');
        }
        out.push_str(&name(i));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Parses `key=value` tokens such as `deg=2` or `bideg=(1,0)`.
pub fn parse_pair(s: &str) -> Result<(i32, i32)> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("expected (p,q), found `{s}`")))?;
    let (a, b) = inner.split_once(',').ok_or_else(|| Error::Parse(format!("expected (p,q), found `{s}`")))?;
    let p = a.trim().parse().map_err(|_| Error::Parse(format!("bad integer in `{s}`")))?;
    let q = b.trim().parse().map_err(|_| Error::Parse(format!("bad integer in `{s}`")))?;
    Ok((p, q))
}
