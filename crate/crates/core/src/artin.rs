//! Local Artinian coefficient rings `Q[t_1..t_k]/I` with `I` a monomial ideal
//! containing a power of the maximal ideal.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{format_q, parse_q, Q};

/// Exponent vector of a monomial.
pub type Monomial = Vec<u32>;

#[derive(Debug, PartialEq, Eq)]
pub struct ArtinAlgebra {
    vars: Vec<String>,
    truncation: Vec<Monomial>,
    basis: Vec<Monomial>,
    index: BTreeMap<Monomial, usize>,
    /// `mul[i][j]` is the basis index of `basis[i] * basis[j]`, if it survives.
    mul: Vec<Vec<Option<usize>>>,
    nilpotency: usize,
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn deglex(a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| b.cmp(a))
}

fn default_var_names(k: usize) -> Vec<String> {
    match k {
        0 => vec![],
        1 => vec!["t".into()],
        2 => vec!["s".into(), "t".into()],
        _ => (1..=k).map(|i| format!("t{i}")).collect(),
    }
}

impl ArtinAlgebra {
    /// Builds `Q[vars]/(truncation)`.
    ///
    /// Every variable must have a pure power among the generators, otherwise the
    /// quotient is not finite-dimensional. The unit monomial is rejected as a
    /// generator since the residue field must survive.
    pub fn new(vars: &[&str], truncation: &[Monomial]) -> Result<Arc<Self>> {
        let k = vars.len();
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            if v.is_empty() || vars[..i].contains(v) {
                return Err(Error::Artin(format!("bad or repeated variable name `{v}`")));
            }
        }
        for g in truncation {
            if g.len() != k {
                return Err(Error::Artin(format!(
                    "monomial {g:?} has {} exponents, expected {k}",
                    g.len()
                )));
            }
            if g.iter().all(|&e| e == 0) {
                return Err(Error::Artin("truncation contains 1; ring would be zero".into()));
            }
        }
        let mut bounds = Vec::with_capacity(k);
        for i in 0..k {
            let pure = truncation
                .iter()
                .filter(|g| g.iter().enumerate().all(|(j, &e)| (j == i) == (e > 0)))
                .map(|g| g[i])
                .min();
            match pure {
                Some(b) => bounds.push(b),
                None => {
                    return Err(Error::Artin(format!(
                        "no power of `{}` in the truncation ideal; quotient is not Artinian",
                        vars[i]
                    )))
                }
            }
        }
        let mut basis = Vec::new();
        let mut cur = vec![0u32; k];
        loop {
            if !truncation.iter().any(|g| divides(g, &cur)) {
                basis.push(cur.clone());
            }
            let mut i = 0;
            while i < k {
                cur[i] += 1;
                if cur[i] < bounds[i] {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
        basis.sort_by(deglex);
        let index: BTreeMap<Monomial, usize> =
            basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let mul = basis
            .iter()
            .map(|a| {
                basis
                    .iter()
                    .map(|b| {
                        let p: Monomial = a.iter().zip(b).map(|(x, y)| x + y).collect();
                        index.get(&p).copied()
                    })
                    .collect()
            })
            .collect();
        let nilpotency = basis.iter().map(|m| m.iter().sum::<u32>()).max().unwrap_or(0) as usize + 1;
        let mut truncation = truncation.to_vec();
        truncation.sort_by(deglex);
        truncation.dedup();
        Ok(Arc::new(ArtinAlgebra { vars, truncation, basis, index, mul, nilpotency }))
    }

    /// The residue field itself, `Q` with `m = 0`.
    pub fn rationals() -> Arc<Self> {
        Self::new(&[], &[]).expect("Q is Artinian")
    }

    /// `Q[t]/(t^n)`.
    pub fn truncated(var: &str, n: u32) -> Arc<Self> {
        Self::new(&[var], &[vec![n]]).expect("valid truncation")
    }

    /// Dual numbers `Q[t]/(t^2)`.
    pub fn dual_numbers() -> Arc<Self> {
        Self::truncated("t", 2)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn truncation(&self) -> &[Monomial] {
        &self.truncation
    }

    /// Basis monomials in degree-lexicographic order; index 0 is the unit.
    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, m: &[u32]) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Total degree of the `i`-th basis monomial.
    pub fn degree_of(&self, i: usize) -> usize {
        self.basis[i].iter().sum::<u32>() as usize
    }

    /// Index of the product of two basis monomials, `None` if it lies in the ideal.
    #[inline]
    pub fn mul_index(&self, i: usize, j: usize) -> Option<usize> {
        self.mul[i][j]
    }

    /// Smallest `N` with `m_A^N = 0`.
    pub fn nilpotency_index(&self) -> usize {
        self.nilpotency
    }

    pub fn zero(self: &Arc<Self>) -> ArtinElement {
        ArtinElement { ring: self.clone(), coeffs: vec![Q::zero(); self.dim()] }
    }

    pub fn one(self: &Arc<Self>) -> ArtinElement {
        self.constant(Q::one())
    }

    pub fn constant(self: &Arc<Self>, c: Q) -> ArtinElement {
        let mut e = self.zero();
        e.coeffs[0] = c;
        e
    }

    /// `c * basis[i]`.
    pub fn monomial(self: &Arc<Self>, i: usize, c: Q) -> ArtinElement {
        let mut e = self.zero();
        e.coeffs[i] = c;
        e
    }

    /// The generator `t_v` (zero if it already lies in the ideal).
    pub fn var(self: &Arc<Self>, name: &str) -> Result<ArtinElement> {
        let v = self
            .vars
            .iter()
            .position(|x| x == name)
            .ok_or_else(|| Error::Artin(format!("unknown variable `{name}`")))?;
        let mut m = vec![0; self.vars.len()];
        m[v] = 1;
        Ok(match self.index_of(&m) {
            Some(i) => self.monomial(i, Q::one()),
            None => self.zero(),
        })
    }

    fn monomial_text(&self, m: &[u32]) -> String {
        let parts: Vec<String> = m
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { self.vars[i].clone() } else { format!("{}^{e}", self.vars[i]) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// Parses a monomial such as `s^2*t` (or `1`).
    pub fn parse_monomial(&self, s: &str) -> Result<Monomial> {
        parse_monomial_with(&self.vars, s)
    }

    /// Header line `artin k=<numvars> vars=<names> trunc=<m1,m2,...>`.
    pub fn header(&self) -> String {
        let trunc: Vec<String> = self.truncation.iter().map(|m| self.monomial_text(m)).collect();
        format!("artin k={} vars={} trunc={}", self.vars.len(), self.vars.join(","), trunc.join(","))
    }

    /// Parses a ring header; `vars=` is optional (defaults: `t`; `s,t`; `t1..tk`).
    pub fn parse_header(line: &str) -> Result<Arc<Self>> {
        let mut toks = line.split_whitespace();
        if toks.next() != Some("artin") {
            return Err(Error::Parse(format!("expected `artin` header, got `{line}`")));
        }
        let mut k = None;
        let mut vars = None;
        let mut trunc = None;
        for t in toks {
            let (key, val) = t
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad token `{t}` in ring header")))?;
            match key {
                "k" => k = Some(val.parse::<usize>().map_err(|_| Error::Parse(format!("bad k `{val}`")))?),
                "vars" => vars = Some(val.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect::<Vec<_>>()),
                "trunc" => trunc = Some(val.to_string()),
                _ => return Err(Error::Parse(format!("unknown key `{key}` in ring header"))),
            }
        }
        let k = k.ok_or_else(|| Error::Parse("ring header lacks k=".into()))?;
        let vars = vars.unwrap_or_else(|| default_var_names(k));
        if vars.len() != k {
            return Err(Error::Parse(format!("k={k} but {} variable names", vars.len())));
        }
        let mut gens = Vec::new();
        if let Some(t) = trunc {
            for g in t.split(',').filter(|s| !s.trim().is_empty()) {
                gens.push(parse_monomial_with(&vars, g)?);
            }
        }
        let names: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        Self::new(&names, &gens)
    }

    /// Parses an element written as a sum of `coeff*monomial` terms.
    pub fn parse_element(self: &Arc<Self>, s: &str) -> Result<ArtinElement> {
        let mut out = self.zero();
        for (sign, term) in split_signed_terms(s)? {
            let factors: Vec<&str> = term.split('*').map(|f| f.trim()).collect();
            let mut coeff = Q::one();
            let mut exps = vec![0u32; self.vars.len()];
            for f in factors {
                if let Some(c) = parse_q(f) {
                    coeff *= c;
                    continue;
                }
                let m = parse_monomial_with(&self.vars, f)?;
                for (e, d) in exps.iter_mut().zip(&m) {
                    *e += d;
                }
            }
            if sign < 0 {
                coeff = -coeff;
            }
            if let Some(i) = self.index_of(&exps) {
                out.coeffs[i] += coeff;
            } else if !self.truncation.iter().any(|g| divides(g, &exps)) {
                return Err(Error::Parse(format!("monomial in `{term}` not reducible")));
            }
        }
        Ok(out)
    }

    /// The reduction map onto a quotient ring with the same variables whose basis
    /// is a subset of ours. Returns the index map, `None` for monomials sent to 0.
    pub fn quotient_map(&self, target: &ArtinAlgebra) -> Result<Vec<Option<usize>>> {
        if self.vars != target.vars {
            return Err(Error::Artin("quotient map needs identical variables".into()));
        }
        if !target.basis.iter().all(|m| self.index.contains_key(m)) {
            return Err(Error::Artin("target ring is not a quotient of the source".into()));
        }
        Ok(self.basis.iter().map(|m| target.index_of(m)).collect())
    }
}

fn parse_monomial_with(vars: &[String], s: &str) -> Result<Monomial> {
    let mut m = vec![0u32; vars.len()];
    let s = s.trim();
    if s == "1" {
        return Ok(m);
    }
    for f in s.split('*') {
        let f = f.trim();
        let (name, e) = match f.split_once('^') {
            Some((n, e)) => (n.trim(), e.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent in `{f}`")))?),
            None => (f, 1),
        };
        let v = vars
            .iter()
            .position(|x| x == name)
            .ok_or_else(|| Error::Parse(format!("`{f}` is not a monomial in {vars:?}")))?;
        m[v] += e;
    }
    Ok(m)
}

/// Splits `a - b + c` into signed terms, respecting no parentheses.
pub(crate) fn split_signed_terms(s: &str) -> Result<Vec<(i32, String)>> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    if s == "0" {
        return Ok(vec![]);
    }
    let mut out = Vec::new();
    let mut sign = 1;
    let mut cur = String::new();
    let mut prev_nonspace: Option<char> = None;
    // signs inside parentheses and arrows `<-` belong to basis names
    let mut depth = 0i32;
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth > 0 || (ch == '-' && prev_nonspace == Some('<')) {
            prev_nonspace = Some(ch);
            cur.push(ch);
            continue;
        }
        let binary = matches!(prev_nonspace, Some(c) if c != '*' && c != '/' && c != '^');
        if (ch == '+' || ch == '-') && binary {
            out.push((sign, std::mem::take(&mut cur)));
            sign = if ch == '-' { -1 } else { 1 };
            prev_nonspace = None;
            continue;
        }
        if (ch == '+' || ch == '-') && prev_nonspace.is_none() && cur.trim().is_empty() {
            if ch == '-' {
                sign = -sign;
            }
            continue;
        }
        if !ch.is_whitespace() {
            prev_nonspace = Some(ch);
        }
        cur.push(ch);
    }
    out.push((sign, cur));
    out.into_iter()
        .map(|(sg, t)| {
            let t = t.trim().to_string();
            if t.is_empty() {
                Err(Error::Parse(format!("dangling operator in `{s}`")))
            } else {
                Ok((sg, t))
            }
        })
        .collect()
}

/// Element of an Artin ring, stored by coefficients on the monomial basis.
#[derive(Clone, Debug)]
pub struct ArtinElement {
    ring: Arc<ArtinAlgebra>,
    coeffs: Vec<Q>,
}

impl PartialEq for ArtinElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring) && self.coeffs == other.coeffs
    }
}

impl ArtinElement {
    pub fn ring(&self) -> &Arc<ArtinAlgebra> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Q {
        &self.coeffs[i]
    }

    pub fn from_coeffs(ring: &Arc<ArtinAlgebra>, coeffs: Vec<Q>) -> Result<Self> {
        if coeffs.len() != ring.dim() {
            return Err(Error::Artin(format!("expected {} coefficients, got {}", ring.dim(), coeffs.len())));
        }
        Ok(ArtinElement { ring: ring.clone(), coeffs })
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::Artin("operands live in different Artin algebras".into()))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Image under the residue map `A -> Q`.
    pub fn residue(&self) -> &Q {
        &self.coeffs[0]
    }

    pub fn in_maximal_ideal(&self) -> bool {
        self.coeffs[0].is_zero()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(ArtinElement { ring: self.ring.clone(), coeffs })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(ArtinElement { ring: self.ring.clone(), coeffs })
    }

    /// Product reduced modulo the truncation ideal.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = vec![Q::zero(); self.ring.dim()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                if let Some(k) = self.ring.mul_index(i, j) {
                    out[k] += a * b;
                }
            }
        }
        Ok(ArtinElement { ring: self.ring.clone(), coeffs: out })
    }

    pub fn scale(&self, c: &Q) -> Self {
        ArtinElement { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = self.ring.one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Inverse of a unit, via the finite geometric series in the nilpotent part.
    pub fn inverse(&self) -> Result<Self> {
        let c = self.coeffs[0].clone();
        if c.is_zero() {
            return Err(Error::Artin("element of the maximal ideal is not invertible".into()));
        }
        let cinv = Q::one() / &c;
        let mut n = self.scale(&cinv);
        n.coeffs[0] = Q::zero();
        let neg_n = -&n;
        let mut term = self.ring.one();
        let mut acc = self.ring.one();
        for _ in 1..self.ring.nilpotency_index() {
            term = &term * &neg_n;
            acc = &acc + &term;
        }
        Ok(acc.scale(&cinv))
    }
}

impl std::ops::Add for &ArtinElement {
    type Output = ArtinElement;
    fn add(self, rhs: &ArtinElement) -> ArtinElement {
        self.try_add(rhs).expect("mismatched Artin algebras")
    }
}

impl std::ops::Sub for &ArtinElement {
    type Output = ArtinElement;
    fn sub(self, rhs: &ArtinElement) -> ArtinElement {
        self.try_sub(rhs).expect("mismatched Artin algebras")
    }
}

impl std::ops::Mul for &ArtinElement {
    type Output = ArtinElement;
    fn mul(self, rhs: &ArtinElement) -> ArtinElement {
        self.try_mul(rhs).expect("mismatched Artin algebras")
    }
}

impl std::ops::Neg for &ArtinElement {
    type Output = ArtinElement;
    fn neg(self) -> ArtinElement {
        ArtinElement { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

impl fmt::Display for ArtinElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = crate::scalar::is_negative(c);
            let abs = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            if i == 0 {
                write!(f, "{}", format_q(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", self.ring.monomial_text(&self.ring.basis[i]))?;
            } else {
                write!(f, "{}*{}", format_q(&abs), self.ring.monomial_text(&self.ring.basis[i]))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
