//! Exact rational scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational number, always kept in lowest terms.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// `n!` as a rational.
pub fn factorial(n: usize) -> Q {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Q::from_integer(acc)
}

pub fn binomial(n: usize, k: usize) -> Q {
    if k > n {
        return Q::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `(-1)^e` for a possibly negative integer exponent.
pub fn sign_pow(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Formats a rational as `p` or `p/q`.
pub fn format_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Q::new(n, d))
        }
        None => Some(Q::from_integer(s.parse().ok()?)),
    }
}

/// Bernoulli numbers `B_0..=B_n` with `B_1 = -1/2`, from `sum_{k=0}^{m} C(m+1,k) B_k = 0`.
pub fn bernoulli_numbers(n: usize) -> Vec<Q> {
    let mut b: Vec<Q> = Vec::with_capacity(n + 1);
    b.push(Q::one());
    for m in 1..=n {
        let mut s = Q::zero();
        for (k, bk) in b.iter().enumerate() {
            s += binomial(m + 1, k) * bk;
        }
        b.push(-s / Q::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// Bernoulli numbers via the Akiyama–Tanigawa transform. That algorithm yields
/// `B_1 = +1/2`; the sign is flipped to match [`bernoulli_numbers`].
pub fn bernoulli_akiyama_tanigawa(n: usize) -> Vec<Q> {
    let mut out = Vec::with_capacity(n + 1);
    let mut a: Vec<Q> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        a.push(qr(1, m as i64 + 1));
        for j in (1..=m).rev() {
            a[j - 1] = Q::from_integer(BigInt::from(j)) * (&a[j - 1] - &a[j]);
        }
        out.push(a[0].clone());
    }
    if n >= 1 {
        out[1] = -out[1].clone();
    }
    out
}

pub fn is_negative(x: &Q) -> bool {
    x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_routes_agree() {
        let a = bernoulli_numbers(12);
        let b = bernoulli_akiyama_tanigawa(12);
        assert_eq!(a, b);
        assert_eq!(a[0], q(1));
        assert_eq!(a[1], qr(-1, 2));
        assert_eq!(a[2], qr(1, 6));
        assert_eq!(a[3], q(0));
        assert_eq!(a[4], qr(-1, 30));
    }

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "7", "-3", "2/3", "-5/7"] {
            assert_eq!(format_q(&parse_q(s).unwrap()), s);
        }
        assert_eq!(parse_q("4/6").unwrap(), qr(2, 3));
        assert!(parse_q("1/0").is_none());
        assert!(parse_q("x").is_none());
    }
}
