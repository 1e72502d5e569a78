//! The suspended cone `C(χ)` of a DGLA morphism `χ: L -> M` with its
//! L-infinity brackets, and the Maurer-Cartan functor of `χ` in the `(x, e^a)`
//! presentation.
//!
//! `C^i = L^i ⊕ M^{i-1}`, `μ_1(l,m) = (dl, χ(l) - dm)` and, for `n ≥ 2`, the
//! `M`-part of `μ_n` is `B_{n-1}(-1)^{n-1}/(n-1)!` times the Koszul-signed sum
//! over `S_n` of `[m_σ1,[…,[m_σ(n-1), χ(l_σn)]…]]`. The `L`-part is `[l_1,l_2]`
//! for `n = 2` and zero otherwise.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::artin::ArtinAlgebra;
use crate::error::{Error, Result};
use crate::graded::{antisymmetric_koszul_sign, koszul_sign, permutations, unshuffles};
use crate::lie::{extend_scalars, Ext, GradedLie, ScalarExtension};
use crate::report::Report;
use crate::scalar::{bernoulli_numbers, factorial, q, sign_pow, Q};

/// Largest arity for which brackets are evaluated.
pub const MAX_ARITY: usize = 8;

/// Per-arity sign in front of the Bernoulli sum, fixed by requiring that
/// `(l,m)` is Maurer-Cartan in the cone exactly when `(l, e^m)` is in `MC_χ`.
/// Do not change: the calibration tests pin every entry.
pub const ARITY_SIGNS: [i32; MAX_ARITY + 1] = [1, 1, 1, 1, 1, 1, 1, 1, 1];

/// Element `(l, m)` of the cone; in degree `i`, `l ∈ L^i` and `m ∈ M^{i-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeElem<A, B> {
    pub l: A,
    pub m: B,
}

/// `η · Σ_σ κ(σ) Π_p (-1)^{e_σp |Y_{p+1}|} [m_σ1,[…,[m_σ(n-1), y_σn]…]]`
/// for homogeneous inputs of cone degrees `d_i`, where `deg m_i = d_i - 1`,
/// `deg y_i = d_i`, `e_i = 1 - d_i`, `η = Π_{i<j} (-1)^{e_i d_j}`, `κ` is the
/// Koszul sign of `σ` for the degrees `e`, and `|Y_{p+1}|` is the degree of the
/// inner bracket `[m_σ(p+1),[…, y_σn]]`.
///
/// With `m_i = i_{x_i}` and `y_i = l_{x_i}` this is the symmetrised triple
/// bracket of the weak Cartan condition.
pub fn nested_bracket_sum<M: GradedLie>(m: &M, ms: &[M::Elem], ys: &[M::Elem], degrees: &[i32]) -> M::Elem {
    let n = degrees.len();
    assert!(n >= 1 && ms.len() == n && ys.len() == n);
    let e: Vec<i32> = degrees.iter().map(|d| 1 - d).collect();
    let mut eta = 0i64;
    for i in 0..n {
        for j in i + 1..n {
            eta += (e[i] * degrees[j]) as i64;
        }
    }
    let mut acc = m.zero();
    for sigma in permutations(n) {
        let last = sigma[n - 1];
        if m.is_zero(&ys[last]) || sigma[..n - 1].iter().any(|&s| m.is_zero(&ms[s])) {
            continue;
        }
        let mut sign = koszul_sign(&sigma, &e).expect("valid permutation") as i64 * sign_pow(eta);
        let mut inner_degree = degrees[last];
        let mut w = ys[last].clone();
        for p in (0..n - 1).rev() {
            let s = sigma[p];
            sign *= sign_pow((e[s] * inner_degree) as i64);
            w = m.bracket(&ms[s], &w);
            inner_degree += degrees[s] - 1;
            if m.is_zero(&w) {
                break;
            }
        }
        if !m.is_zero(&w) {
            acc = m.add(&acc, &m.scale(&w, &q(sign)));
        }
    }
    acc
}

/// Bracket engine shared by the cone over `Q` and its scalar extensions.
pub struct Brackets<'a, L: GradedLie, M: GradedLie> {
    pub l: &'a L,
    pub m: &'a M,
    chi: &'a dyn Fn(&L::Elem) -> M::Elem,
    signs: &'a [i32; MAX_ARITY + 1],
    bernoulli: &'a [Q],
}

pub type Elem<L, M> = ConeElem<<L as GradedLie>::Elem, <M as GradedLie>::Elem>;

impl<'a, L: GradedLie, M: GradedLie> Brackets<'a, L, M> {
    pub fn chi(&self, x: &L::Elem) -> M::Elem {
        (self.chi)(x)
    }

    pub fn zero(&self) -> Elem<L, M> {
        ConeElem { l: self.l.zero(), m: self.m.zero() }
    }

    pub fn is_zero(&self, c: &Elem<L, M>) -> bool {
        self.l.is_zero(&c.l) && self.m.is_zero(&c.m)
    }

    pub fn add(&self, a: &Elem<L, M>, b: &Elem<L, M>) -> Elem<L, M> {
        ConeElem { l: self.l.add(&a.l, &b.l), m: self.m.add(&a.m, &b.m) }
    }

    pub fn sub(&self, a: &Elem<L, M>, b: &Elem<L, M>) -> Elem<L, M> {
        ConeElem { l: self.l.sub(&a.l, &b.l), m: self.m.sub(&a.m, &b.m) }
    }

    pub fn scale(&self, a: &Elem<L, M>, c: &Q) -> Elem<L, M> {
        ConeElem { l: self.l.scale(&a.l, c), m: self.m.scale(&a.m, c) }
    }

    /// Homogeneous components keyed by cone degree.
    pub fn homogeneous_parts(&self, c: &Elem<L, M>) -> Vec<(i32, Elem<L, M>)> {
        let mut out: Vec<(i32, Elem<L, M>)> = Vec::new();
        for (d, part) in self.l.homogeneous_parts(&c.l) {
            out.push((d, ConeElem { l: part, m: self.m.zero() }));
        }
        for (d, part) in self.m.homogeneous_parts(&c.m) {
            match out.iter_mut().find(|(e, _)| *e == d + 1) {
                Some((_, slot)) => slot.m = part,
                None => out.push((d + 1, ConeElem { l: self.l.zero(), m: part })),
            }
        }
        out.sort_by_key(|(d, _)| *d);
        out
    }

    pub fn degree_of(&self, c: &Elem<L, M>) -> Option<i32> {
        match self.homogeneous_parts(c).as_slice() {
            [(d, _)] => Some(*d),
            _ => None,
        }
    }

    pub fn mu1(&self, c: &Elem<L, M>) -> Elem<L, M> {
        ConeElem { l: self.l.differential(&c.l), m: self.m.sub(&self.chi(&c.l), &self.m.differential(&c.m)) }
    }

    /// Coefficient `±B_{n-1}(-1)^{n-1}/(n-1)!` of the Bernoulli sum.
    pub fn coefficient(&self, n: usize) -> Q {
        let b = &self.bernoulli[n - 1];
        b * q(sign_pow(n as i64 - 1) * self.signs[n] as i64) / factorial(n - 1)
    }

    fn mu_homogeneous(&self, degrees: &[i32], cs: &[&Elem<L, M>]) -> Elem<L, M> {
        let n = cs.len();
        let l = if n == 2 { self.l.bracket(&cs[0].l, &cs[1].l) } else { self.l.zero() };
        let coef = self.coefficient(n);
        if coef.is_zero() {
            return ConeElem { l, m: self.m.zero() };
        }
        let ms: Vec<M::Elem> = cs.iter().map(|c| c.m.clone()).collect();
        let ys: Vec<M::Elem> = cs.iter().map(|c| self.chi(&c.l)).collect();
        let m = self.m.scale(&nested_bracket_sum(self.m, &ms, &ys, degrees), &coef);
        ConeElem { l, m }
    }

    /// `μ_n(c_1, …, c_n)` for `1 ≤ n ≤ MAX_ARITY`, extended multilinearly.
    pub fn mu(&self, cs: &[Elem<L, M>]) -> Elem<L, M> {
        let n = cs.len();
        assert!((1..=MAX_ARITY).contains(&n), "arity {n} out of range");
        if n == 1 {
            return self.mu1(&cs[0]);
        }
        let parts: Vec<Vec<(i32, Elem<L, M>)>> = cs.iter().map(|c| self.homogeneous_parts(c)).collect();
        if parts.iter().any(|p| p.is_empty()) {
            return self.zero();
        }
        let mut acc = self.zero();
        let mut idx = vec![0usize; n];
        loop {
            let degrees: Vec<i32> = (0..n).map(|i| parts[i][idx[i]].0).collect();
            let elems: Vec<&Elem<L, M>> = (0..n).map(|i| &parts[i][idx[i]].1).collect();
            acc = self.add(&acc, &self.mu_homogeneous(&degrees, &elems));
            let mut k = 0;
            loop {
                if k == n {
                    return acc;
                }
                idx[k] += 1;
                if idx[k] < parts[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    pub fn mu2(&self, a: &Elem<L, M>, b: &Elem<L, M>) -> Elem<L, M> {
        self.mu(&[a.clone(), b.clone()])
    }

    /// `μ_n` for `n ≥ 3`.
    pub fn mu_n(&self, cs: &[Elem<L, M>]) -> Result<Elem<L, M>> {
        if cs.len() < 3 || cs.len() > MAX_ARITY {
            return Err(Error::Precondition(format!("higher brackets need arity 3..={MAX_ARITY}, got {}", cs.len())));
        }
        Ok(self.mu(cs))
    }

    /// `Σ_{n=1}^{max_arity} μ_n(c, …, c) / n!`.
    pub fn mc_sum(&self, c: &Elem<L, M>, max_arity: usize) -> Elem<L, M> {
        let mut acc = self.zero();
        for n in 1..=max_arity.min(MAX_ARITY) {
            let args = vec![c.clone(); n];
            acc = self.add(&acc, &self.scale(&self.mu(&args), &(Q::one() / factorial(n))));
        }
        acc
    }

    /// Basis of the cone: `(e_i, 0)` in degree `deg e_i`, then `(0, f_j)` in
    /// degree `deg f_j + 1`.
    pub fn basis(&self) -> Vec<(i32, String, Elem<L, M>)> {
        let mut out = Vec::new();
        for i in 0..self.l.dim() {
            out.push((self.l.basis_degree(i), format!("L:{}", self.l.basis_name(i)), ConeElem {
                l: self.l.basis(i),
                m: self.m.zero(),
            }));
        }
        for j in 0..self.m.dim() {
            out.push((self.m.basis_degree(j) + 1, format!("M:{}", self.m.basis_name(j)), ConeElem {
                l: self.l.zero(),
                m: self.m.basis(j),
            }));
        }
        out
    }

    /// Generalized Jacobi identity of arity `n` on homogeneous inputs, in the
    /// convention `Σ_{i+j=n+1} Σ_{unshuffles} χ(σ)(-1)^{i(j-1)} ℓ_j(ℓ_i(…), …)`
    /// with `ℓ_k = (-1)^{k(k+1)/2+1} μ_k`.
    pub fn jacobiator(&self, degrees: &[i32], xs: &[Elem<L, M>]) -> Elem<L, M> {
        let n = xs.len();
        let lm_sign = |k: usize| sign_pow((k * (k + 1) / 2 + 1) as i64);
        let mut acc = self.zero();
        for i in 1..=n {
            let j = n + 1 - i;
            for sigma in unshuffles(i, n) {
                let s = antisymmetric_koszul_sign(&sigma, degrees).expect("valid permutation") as i64
                    * sign_pow((i * (j - 1)) as i64)
                    * lm_sign(i)
                    * lm_sign(j);
                let inner_args: Vec<Elem<L, M>> = sigma[..i].iter().map(|&k| xs[k].clone()).collect();
                let inner = self.mu(&inner_args);
                if self.is_zero(&inner) {
                    continue;
                }
                let mut outer_args = vec![inner];
                outer_args.extend(sigma[i..].iter().map(|&k| xs[k].clone()));
                let v = self.mu(&outer_args);
                acc = self.add(&acc, &self.scale(&v, &q(s)));
            }
        }
        acc
    }

    /// Checks the generalized Jacobi identities for arities `1..=max_arity`
    /// on all multisets of basis elements.
    pub fn check_linfty(&self, max_arity: usize) -> Report {
        let basis = self.basis();
        let mut report = Report::new();
        for n in 1..=max_arity {
            let mut idx = vec![0usize; n];
            if basis.is_empty() {
                break;
            }
            loop {
                let degrees: Vec<i32> = idx.iter().map(|&k| basis[k].0).collect();
                let xs: Vec<Elem<L, M>> = idx.iter().map(|&k| basis[k].2.clone()).collect();
                let r = self.jacobiator(&degrees, &xs);
                if !self.is_zero(&r) {
                    let names: Vec<&str> = idx.iter().map(|&k| basis[k].1.as_str()).collect();
                    report.fail(format!("linfty-jacobi-{n}"), format!("({})", names.join(",")));
                }
                // next multiset in non-decreasing order
                let mut k = n;
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    if idx[k] + 1 < basis.len() {
                        idx[k] += 1;
                        for t in k + 1..n {
                            idx[t] = idx[k];
                        }
                        k = usize::MAX;
                        break;
                    }
                }
                if k != usize::MAX {
                    break;
                }
            }
        }
        report
    }
}

/// The cone of `χ: L -> M` over `Q`.
pub struct Cone<L: GradedLie, M: GradedLie> {
    l: L,
    m: M,
    chi: Box<dyn Fn(&L::Elem) -> M::Elem>,
    signs: [i32; MAX_ARITY + 1],
    bernoulli: Vec<Q>,
}

impl<L: GradedLie, M: GradedLie> Cone<L, M> {
    pub fn new(l: L, m: M, chi: impl Fn(&L::Elem) -> M::Elem + 'static) -> Self {
        Cone { l, m, chi: Box::new(chi), signs: ARITY_SIGNS, bernoulli: bernoulli_numbers(MAX_ARITY) }
    }

    /// Same cone with the sign of the arity-`n` bracket flipped; used to show
    /// that the calibrated signs are the only ones that work.
    pub fn with_flipped_sign(mut self, n: usize) -> Self {
        self.signs[n] = -self.signs[n];
        self
    }

    pub fn source(&self) -> &L {
        &self.l
    }

    pub fn target(&self) -> &M {
        &self.m
    }

    pub fn chi(&self, x: &L::Elem) -> M::Elem {
        (self.chi)(x)
    }

    pub fn brackets(&self) -> Brackets<'_, L, M> {
        Brackets { l: &self.l, m: &self.m, chi: &*self.chi, signs: &self.signs, bernoulli: &self.bernoulli }
    }

    pub fn over<'a>(&'a self, ring: &Arc<ArtinAlgebra>) -> ConeOver<'a, L, M> {
        let chi = &self.chi;
        ConeOver {
            cone: self,
            lx: extend_scalars(&self.l, ring),
            mx: extend_scalars(&self.m, ring),
            chi_ext: Box::new(move |x: &Ext<L::Elem>| x.map(|c| chi(c))),
        }
    }
}

/// Pair `(x, e^a)` with `x ∈ L^1 ⊗ m_A` and `a ∈ M^0 ⊗ m_A`, stored by exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct McChi<A, B> {
    pub x: Ext<A>,
    pub a: Ext<B>,
}

/// Gauge pair `(e^l, e^{dm})` with `l ∈ L^0 ⊗ m_A` and `m ∈ M^{-1} ⊗ m_A`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugePair<A, B> {
    pub l: Ext<A>,
    pub m: Ext<B>,
}

/// Residuals of the two defining equations of `MC_χ`.
#[derive(Clone, Debug, PartialEq)]
pub struct McChiCheck<A, B> {
    pub holds: bool,
    pub flatness: Ext<A>,
    pub gauge: Ext<B>,
}

/// The cone after extending scalars to an Artin ring.
pub struct ConeOver<'a, L: GradedLie, M: GradedLie> {
    cone: &'a Cone<L, M>,
    pub lx: ScalarExtension<'a, L>,
    pub mx: ScalarExtension<'a, M>,
    chi_ext: Box<dyn Fn(&Ext<L::Elem>) -> Ext<M::Elem> + 'a>,
}

pub type ExtElem<L, M> = ConeElem<Ext<<L as GradedLie>::Elem>, Ext<<M as GradedLie>::Elem>>;

impl<'a, L: GradedLie, M: GradedLie> ConeOver<'a, L, M> {
    pub fn brackets(&self) -> Brackets<'_, ScalarExtension<'a, L>, ScalarExtension<'a, M>> {
        Brackets {
            l: &self.lx,
            m: &self.mx,
            chi: &*self.chi_ext,
            signs: &self.cone.signs,
            bernoulli: &self.cone.bernoulli,
        }
    }

    pub fn ring(&self) -> &Arc<ArtinAlgebra> {
        self.lx.ring()
    }

    pub fn chi(&self, x: &Ext<L::Elem>) -> Ext<M::Elem> {
        (self.chi_ext)(x)
    }

    /// Residual `Σ μ_n(c^n)/n!`, finite since `c` has coefficients in `m_A`.
    pub fn mc_cone_residual(&self, c: &ExtElem<L, M>) -> Result<ExtElem<L, M>> {
        let br = self.brackets();
        for (d, _) in br.homogeneous_parts(c) {
            if d != 1 {
                return Err(Error::Degree(format!("cone Maurer-Cartan element has a component of degree {d}")));
            }
        }
        if !self.lx.in_maximal_ideal(&c.l) || !self.mx.in_maximal_ideal(&c.m) {
            return Err(Error::Precondition("coefficients must lie in the maximal ideal".into()));
        }
        let max = self.ring().nilpotency_index().saturating_sub(1).max(1);
        Ok(br.mc_sum(c, max))
    }

    pub fn mc_cone_check(&self, c: &ExtElem<L, M>) -> Result<(bool, ExtElem<L, M>)> {
        let r = self.mc_cone_residual(c)?;
        Ok((self.brackets().is_zero(&r), r))
    }

    /// `(l, m) ↦ (l, e^m)`.
    pub fn cone_to_mcchi(&self, c: &ExtElem<L, M>) -> McChi<L::Elem, M::Elem> {
        McChi { x: c.l.clone(), a: c.m.clone() }
    }

    pub fn mcchi_to_cone(&self, e: &McChi<L::Elem, M::Elem>) -> ExtElem<L, M> {
        ConeElem { l: e.x.clone(), m: e.a.clone() }
    }

    /// Checks `dx + ½[x,x] = 0` and `e^a * χ(x) = 0`.
    pub fn mc_chi_check(&self, e: &McChi<L::Elem, M::Elem>) -> Result<McChiCheck<L::Elem, M::Elem>> {
        let flatness = self.lx.mc_residual(&e.x)?;
        let gauge = self.mx.gauge_act(&e.a, &self.chi(&e.x))?;
        Ok(McChiCheck { holds: self.lx.is_zero(&flatness) && self.mx.is_zero(&gauge), flatness, gauge })
    }

    /// `(e^l, e^{dm}) * (x, e^a) = (e^l * x, e^{dm • a • (-χ(l))})`.
    pub fn gauge_act_chi(
        &self,
        g: &GaugePair<L::Elem, M::Elem>,
        e: &McChi<L::Elem, M::Elem>,
    ) -> Result<McChi<L::Elem, M::Elem>> {
        if !self.mx.in_maximal_ideal(&g.m) {
            return Err(Error::Precondition("gauge exponent must lie in the maximal ideal".into()));
        }
        for (d, _) in self.mx.homogeneous_parts(&g.m) {
            if d != -1 {
                return Err(Error::Degree(format!("gauge m-component must have degree -1, found {d}")));
            }
        }
        self.act_by_exponents(&g.l, &self.mx.differential(&g.m), e)
    }

    /// Gauge action with the `M`-factor given directly by its exponent `b ∈ dM^{-1} ⊗ m_A`.
    pub fn act_by_exponents(
        &self,
        l: &Ext<L::Elem>,
        b: &Ext<M::Elem>,
        e: &McChi<L::Elem, M::Elem>,
    ) -> Result<McChi<L::Elem, M::Elem>> {
        let x = self.lx.gauge_act(l, &e.x)?;
        let minus_chi_l = self.mx.scale(&self.chi(l), &q(-1));
        let a = self.mx.bch(&self.mx.bch(b, &e.a)?, &minus_chi_l)?;
        Ok(McChi { x, a })
    }

    /// Exponents of the product `h · g` in `exp(L^0 ⊗ m_A) × exp(dM^{-1} ⊗ m_A)`:
    /// acting by `g` and then by `h` equals acting by these.
    pub fn compose_gauge(
        &self,
        h: &GaugePair<L::Elem, M::Elem>,
        g: &GaugePair<L::Elem, M::Elem>,
    ) -> Result<(Ext<L::Elem>, Ext<M::Elem>)> {
        let l = self.lx.bch(&h.l, &g.l)?;
        let b = self.mx.bch(&self.mx.differential(&h.m), &self.mx.differential(&g.m))?;
        Ok((l, b))
    }
}

#[cfg(test)]
mod tests;
