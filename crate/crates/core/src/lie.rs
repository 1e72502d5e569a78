//! The graded Lie algebra interface, scalar extension `L ⊗ A`, and the
//! nilpotent constructions built on it: Maurer-Cartan residuals, the gauge
//! action and Baker-Campbell-Hausdorff products.

use std::fmt::Debug;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::artin::{ArtinAlgebra, ArtinElement};
use crate::error::{Error, Result};
use crate::scalar::{factorial, q, Q};

/// A finite-dimensional differential graded Lie algebra over `Q`.
///
/// Elements need not be homogeneous; `homogeneous_parts` splits them.
pub trait GradedLie {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn scale(&self, x: &Self::Elem, c: &Q) -> Self::Elem;
    fn bracket(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn differential(&self, x: &Self::Elem) -> Self::Elem;
    fn homogeneous_parts(&self, x: &Self::Elem) -> Vec<(i32, Self::Elem)>;

    fn dim(&self) -> usize;
    fn basis(&self, i: usize) -> Self::Elem;
    fn basis_degree(&self, i: usize) -> i32;
    fn basis_name(&self, i: usize) -> String;
    /// Nonzero coordinates on the basis.
    fn coordinates(&self, x: &Self::Elem) -> Vec<(usize, Q)>;

    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.add(x, &self.neg(y))
    }

    fn neg(&self, x: &Self::Elem) -> Self::Elem {
        self.scale(x, &q(-1))
    }

    /// Degree of a nonzero homogeneous element.
    fn degree_of(&self, x: &Self::Elem) -> Option<i32> {
        let parts = self.homogeneous_parts(x);
        match parts.as_slice() {
            [(d, _)] => Some(*d),
            _ => None,
        }
    }

    fn combination(&self, terms: &[(usize, Q)]) -> Self::Elem {
        let mut acc = self.zero();
        for (i, c) in terms {
            acc = self.add(&acc, &self.scale(&self.basis(*i), c));
        }
        acc
    }
}

/// Element of `L ⊗ A`, stored as one `L`-element per basis monomial of `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ext<E> {
    ring: Arc<ArtinAlgebra>,
    comps: Vec<E>,
}

impl<E: Clone> Ext<E> {
    pub fn from_components(ring: &Arc<ArtinAlgebra>, comps: Vec<E>) -> Result<Self> {
        if comps.len() != ring.dim() {
            return Err(Error::Dimension(format!(
                "{} components for a ring of dimension {}",
                comps.len(),
                ring.dim()
            )));
        }
        Ok(Ext { ring: ring.clone(), comps })
    }

    pub fn ring(&self) -> &Arc<ArtinAlgebra> {
        &self.ring
    }

    pub fn components(&self) -> &[E] {
        &self.comps
    }

    /// Component on the `i`-th monomial of the ring.
    pub fn component(&self, i: usize) -> &E {
        &self.comps[i]
    }

    /// Applies a `Q`-linear map componentwise.
    pub fn map<F, T>(&self, f: F) -> Ext<T>
    where
        F: Fn(&E) -> T,
    {
        Ext { ring: self.ring.clone(), comps: self.comps.iter().map(f).collect() }
    }
}

/// `L ⊗ A` as a graded Lie algebra over `Q` (brackets and `d` extended
/// `A`-bilinearly; `A` sits in degree zero so no signs appear).
pub struct ScalarExtension<'g, G: GradedLie> {
    base: &'g G,
    ring: Arc<ArtinAlgebra>,
}

/// Extends scalars of `base` to the Artin ring `ring`.
pub fn extend_scalars<'g, G: GradedLie>(base: &'g G, ring: &Arc<ArtinAlgebra>) -> ScalarExtension<'g, G> {
    ScalarExtension { base, ring: ring.clone() }
}

impl<'g, G: GradedLie> ScalarExtension<'g, G> {
    pub fn base(&self) -> &'g G {
        self.base
    }

    pub fn ring(&self) -> &Arc<ArtinAlgebra> {
        &self.ring
    }

    /// `x ⊗ a`.
    pub fn lift(&self, x: &G::Elem, a: &ArtinElement) -> Ext<G::Elem> {
        Ext {
            ring: self.ring.clone(),
            comps: a.coeffs().iter().map(|c| self.base.scale(x, c)).collect(),
        }
    }

    /// `x ⊗ t^mono` for the monomial with ring index `mono`.
    pub fn lift_monomial(&self, x: &G::Elem, mono: usize) -> Ext<G::Elem> {
        let mut comps = vec![self.base.zero(); self.ring.dim()];
        comps[mono] = x.clone();
        Ext { ring: self.ring.clone(), comps }
    }

    /// Element from `A`-coefficients on the basis of `L`.
    pub fn from_coefficients(&self, coeffs: &[(usize, ArtinElement)]) -> Ext<G::Elem> {
        let mut acc = self.zero();
        for (i, a) in coeffs {
            acc = self.add(&acc, &self.lift(&self.base.basis(*i), a));
        }
        acc
    }

    /// `A`-coefficient of every basis vector of `L`.
    pub fn coefficients(&self, x: &Ext<G::Elem>) -> Vec<ArtinElement> {
        let mut out: Vec<Vec<Q>> = vec![vec![Q::zero(); self.ring.dim()]; self.base.dim()];
        for (m, comp) in x.comps.iter().enumerate() {
            for (i, c) in self.base.coordinates(comp) {
                out[i][m] = c;
            }
        }
        out.into_iter().map(|c| ArtinElement::from_coeffs(&self.ring, c).expect("sized")).collect()
    }

    pub fn mul_scalar(&self, a: &ArtinElement, x: &Ext<G::Elem>) -> Ext<G::Elem> {
        let mut comps = vec![self.base.zero(); self.ring.dim()];
        for (i, c) in a.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, xj) in x.comps.iter().enumerate() {
                if let Some(k) = self.ring.mul_index(i, j) {
                    comps[k] = self.base.add(&comps[k], &self.base.scale(xj, c));
                }
            }
        }
        Ext { ring: self.ring.clone(), comps }
    }

    /// Reduces coefficients along a quotient `A -> A'` with the same variables.
    pub fn reduce<'h>(&self, x: &Ext<G::Elem>, target: &ScalarExtension<'h, G>) -> Result<Ext<G::Elem>> {
        let map = self.ring.quotient_map(&target.ring)?;
        let mut comps = vec![self.base.zero(); target.ring.dim()];
        for (i, c) in x.comps.iter().enumerate() {
            if let Some(j) = map[i] {
                comps[j] = self.base.add(&comps[j], c);
            }
        }
        Ok(Ext { ring: target.ring.clone(), comps })
    }

    /// True when all coefficients lie in the maximal ideal.
    pub fn in_maximal_ideal(&self, x: &Ext<G::Elem>) -> bool {
        self.base.is_zero(&x.comps[0])
    }

    fn check_ring(&self, x: &Ext<G::Elem>) -> Result<()> {
        if Arc::ptr_eq(&x.ring, &self.ring) || *x.ring == *self.ring {
            Ok(())
        } else {
            Err(Error::Artin("element lives over a different Artin ring".into()))
        }
    }

    fn require_degree(&self, x: &Ext<G::Elem>, deg: i32, what: &str) -> Result<()> {
        self.check_ring(x)?;
        for (d, _) in self.homogeneous_parts(x) {
            if d != deg {
                return Err(Error::Degree(format!("{what} must have degree {deg}, found a component of degree {d}")));
            }
        }
        if !self.in_maximal_ideal(x) {
            return Err(Error::Precondition(format!("{what} must have coefficients in the maximal ideal")));
        }
        Ok(())
    }

    /// `dx + 1/2 [x, x]`.
    pub fn mc_residual(&self, x: &Ext<G::Elem>) -> Result<Ext<G::Elem>> {
        self.require_degree(x, 1, "Maurer-Cartan candidate")?;
        let half = Q::new(1.into(), 2.into());
        Ok(self.add(&self.differential(x), &self.scale(&self.bracket(x, x), &half)))
    }

    pub fn mc_check(&self, x: &Ext<G::Elem>) -> Result<(bool, Ext<G::Elem>)> {
        let r = self.mc_residual(x)?;
        Ok((self.is_zero(&r), r))
    }

    /// `sum_{n >= 0} ad_a^n(y) * coeff(n)`, stopping once the iterates vanish.
    fn ad_series(&self, a: &Ext<G::Elem>, y: &Ext<G::Elem>, coeff: impl Fn(usize) -> Q) -> Ext<G::Elem> {
        let mut term = y.clone();
        let mut acc = self.zero();
        let cap = self.ring.nilpotency_index() + 1;
        for n in 0..=cap {
            if self.is_zero(&term) {
                break;
            }
            acc = self.add(&acc, &self.scale(&term, &coeff(n)));
            term = self.bracket(a, &term);
        }
        acc
    }

    /// `e^{ad_a}(y)`.
    pub fn exp_ad(&self, a: &Ext<G::Elem>, y: &Ext<G::Elem>) -> Ext<G::Elem> {
        self.ad_series(a, y, |n| Q::one() / factorial(n))
    }

    /// Gauge action `e^a * x = x + sum_n ad_a^n([a,x] - da)/(n+1)!`.
    pub fn gauge_act(&self, a: &Ext<G::Elem>, x: &Ext<G::Elem>) -> Result<Ext<G::Elem>> {
        self.require_degree(a, 0, "gauge element")?;
        self.require_degree(x, 1, "Maurer-Cartan element")?;
        Ok(self.gauge_act_unchecked(a, x))
    }

    pub(crate) fn gauge_act_unchecked(&self, a: &Ext<G::Elem>, x: &Ext<G::Elem>) -> Ext<G::Elem> {
        let seed = self.sub(&self.bracket(a, x), &self.differential(a));
        let tail = self.ad_series(a, &seed, |n| Q::one() / factorial(n + 1));
        self.add(x, &tail)
    }

    /// Baker-Campbell-Hausdorff product via the Dynkin series, truncated at the
    /// nilpotency index of the ring.
    pub fn bch(&self, x: &Ext<G::Elem>, y: &Ext<G::Elem>) -> Result<Ext<G::Elem>> {
        self.require_degree(x, 0, "BCH argument")?;
        self.require_degree(y, 0, "BCH argument")?;
        Ok(self.bch_unchecked(x, y))
    }

    pub(crate) fn bch_unchecked(&self, x: &Ext<G::Elem>, y: &Ext<G::Elem>) -> Ext<G::Elem> {
        let max_len = self.ring.nilpotency_index().saturating_sub(1);
        let mut acc = self.zero();
        // Each block (r_i, s_i) contributes x^{r_i} y^{s_i}; words longer than
        // max_len vanish since every letter lies in m_A.
        let mut blocks: Vec<(usize, usize)> = Vec::new();
        self.dynkin_rec(x, y, max_len, &mut blocks, &mut acc);
        acc
    }

    fn dynkin_rec(
        &self,
        x: &Ext<G::Elem>,
        y: &Ext<G::Elem>,
        budget: usize,
        blocks: &mut Vec<(usize, usize)>,
        acc: &mut Ext<G::Elem>,
    ) {
        if !blocks.is_empty() {
            let n = blocks.len();
            let len: usize = blocks.iter().map(|(r, s)| r + s).sum();
            let mut denom = Q::from_integer((n as i64).into()) * Q::from_integer((len as i64).into());
            for (r, s) in blocks.iter() {
                denom *= factorial(*r) * factorial(*s);
            }
            let sign = if n % 2 == 1 { Q::one() } else { -Q::one() };
            let word: Vec<&Ext<G::Elem>> = blocks
                .iter()
                .flat_map(|&(r, s)| std::iter::repeat_n(x, r).chain(std::iter::repeat_n(y, s)))
                .collect();
            let mut w = word[word.len() - 1].clone();
            for letter in word[..word.len() - 1].iter().rev() {
                if self.is_zero(&w) {
                    break;
                }
                w = self.bracket(letter, &w);
            }
            if !self.is_zero(&w) {
                *acc = self.add(acc, &self.scale(&w, &(sign / denom)));
            }
        }
        for total in 1..=budget {
            for r in 0..=total {
                blocks.push((r, total - r));
                self.dynkin_rec(x, y, budget - total, blocks, acc);
                blocks.pop();
            }
        }
    }
}

impl<'g, G: GradedLie> GradedLie for ScalarExtension<'g, G> {
    type Elem = Ext<G::Elem>;

    fn zero(&self) -> Self::Elem {
        Ext { ring: self.ring.clone(), comps: vec![self.base.zero(); self.ring.dim()] }
    }

    fn is_zero(&self, x: &Self::Elem) -> bool {
        x.comps.iter().all(|c| self.base.is_zero(c))
    }

    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        Ext {
            ring: self.ring.clone(),
            comps: x.comps.iter().zip(&y.comps).map(|(a, b)| self.base.add(a, b)).collect(),
        }
    }

    fn scale(&self, x: &Self::Elem, c: &Q) -> Self::Elem {
        x.map(|a| self.base.scale(a, c))
    }

    fn bracket(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        let mut comps = vec![self.base.zero(); self.ring.dim()];
        for (i, xi) in x.comps.iter().enumerate() {
            if self.base.is_zero(xi) {
                continue;
            }
            for (j, yj) in y.comps.iter().enumerate() {
                if self.base.is_zero(yj) {
                    continue;
                }
                if let Some(k) = self.ring.mul_index(i, j) {
                    comps[k] = self.base.add(&comps[k], &self.base.bracket(xi, yj));
                }
            }
        }
        Ext { ring: self.ring.clone(), comps }
    }

    fn differential(&self, x: &Self::Elem) -> Self::Elem {
        x.map(|a| self.base.differential(a))
    }

    fn homogeneous_parts(&self, x: &Self::Elem) -> Vec<(i32, Self::Elem)> {
        let mut out: Vec<(i32, Self::Elem)> = Vec::new();
        for (m, comp) in x.comps.iter().enumerate() {
            for (d, part) in self.base.homogeneous_parts(comp) {
                let slot = match out.iter().position(|(e, _)| *e == d) {
                    Some(p) => p,
                    None => {
                        out.push((d, self.zero()));
                        out.len() - 1
                    }
                };
                out[slot].1.comps[m] = part;
            }
        }
        out.sort_by_key(|(d, _)| *d);
        out
    }

    fn dim(&self) -> usize {
        self.base.dim() * self.ring.dim()
    }

    fn basis(&self, i: usize) -> Self::Elem {
        let (b, m) = (i / self.ring.dim(), i % self.ring.dim());
        self.lift_monomial(&self.base.basis(b), m)
    }

    fn basis_degree(&self, i: usize) -> i32 {
        self.base.basis_degree(i / self.ring.dim())
    }

    fn basis_name(&self, i: usize) -> String {
        let (b, m) = (i / self.ring.dim(), i % self.ring.dim());
        let mono = self.ring.monomial(m, Q::one());
        format!("{}*{}", mono, self.base.basis_name(b))
    }

    fn coordinates(&self, x: &Self::Elem) -> Vec<(usize, Q)> {
        let r = self.ring.dim();
        let mut out = Vec::new();
        for (m, comp) in x.comps.iter().enumerate() {
            for (i, c) in self.base.coordinates(comp) {
                out.push((i * r + m, c));
            }
        }
        out.sort_by_key(|(i, _)| *i);
        out
    }
}

impl<G: GradedLie> GradedLie for &G {
    type Elem = G::Elem;

    fn zero(&self) -> Self::Elem {
        (**self).zero()
    }
    fn is_zero(&self, x: &Self::Elem) -> bool {
        (**self).is_zero(x)
    }
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        (**self).add(x, y)
    }
    fn scale(&self, x: &Self::Elem, c: &Q) -> Self::Elem {
        (**self).scale(x, c)
    }
    fn bracket(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        (**self).bracket(x, y)
    }
    fn differential(&self, x: &Self::Elem) -> Self::Elem {
        (**self).differential(x)
    }
    fn homogeneous_parts(&self, x: &Self::Elem) -> Vec<(i32, Self::Elem)> {
        (**self).homogeneous_parts(x)
    }
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn basis(&self, i: usize) -> Self::Elem {
        (**self).basis(i)
    }
    fn basis_degree(&self, i: usize) -> i32 {
        (**self).basis_degree(i)
    }
    fn basis_name(&self, i: usize) -> String {
        (**self).basis_name(i)
    }
    fn coordinates(&self, x: &Self::Elem) -> Vec<(usize, Q)> {
        (**self).coordinates(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgla::Dgla;
    use crate::endo::{op_compose, op_exp, op_log, AOperator, EndDgla};
    use crate::graded::GradedSpace;
    use crate::linalg::{SparseMatrix, Vector};
    use crate::scalar::qr;

    #[test]
    fn bracket_extends_bilinearly() {
        let l = Dgla::sl2();
        let ring = ArtinAlgebra::truncated("t", 3);
        let ext = extend_scalars(&l, &ring);
        let t = ring.var("t").unwrap();
        let x = ext.lift(&l.basis(0), &t);
        let y = ext.lift(&l.basis(2), &t);
        assert_eq!(ext.bracket(&x, &y), ext.lift(&l.basis(1), &t.pow(2)));
        // ad_a^3 = 0 when m^3 = 0
        let a = ext.add(&x, &ext.lift(&l.basis(1), &t));
        let mut v = ext.lift(&l.basis(2), &ring.one());
        for _ in 0..3 {
            v = ext.bracket(&a, &v);
        }
        assert!(ext.is_zero(&v));
    }

    #[test]
    fn mc_residual_of_non_flat_element() {
        let l = Dgla::odd_square();
        let ring = ArtinAlgebra::truncated("t", 3);
        let ext = extend_scalars(&l, &ring);
        let t = ring.var("t").unwrap();
        let x = ext.lift(&l.basis(0), &t);
        let (ok, r) = ext.mc_check(&x).unwrap();
        assert!(!ok);
        // 1/2 t^2 [x,x] = 1/2 t^2 y
        assert_eq!(r, ext.lift(&l.basis(1), &t.pow(2).scale(&qr(1, 2))));
        assert!(ext.mc_check(&ext.zero()).unwrap().0);
        assert!(ext.mc_check(&ext.lift(&l.basis(1), &t)).is_err());
    }

    #[test]
    fn abelian_gauge_subtracts_differential() {
        let space = GradedSpace::from_degrees([("a", 0), ("b", 1)]).unwrap();
        let mut data = crate::dgla::DglaData::new(space);
        data.set_d(0, &[q(0), q(1)]);
        let l = Dgla::new(data).unwrap();
        let ring = ArtinAlgebra::truncated("t", 3);
        let ext = extend_scalars(&l, &ring);
        let t = ring.var("t").unwrap();
        let a = ext.lift(&l.basis(0), &t);
        let x = ext.lift(&l.basis(1), &t.pow(2));
        let y = ext.gauge_act(&a, &x).unwrap();
        assert_eq!(y, ext.sub(&x, &ext.differential(&a)));
        assert_eq!(ext.gauge_act(&ext.zero(), &x).unwrap(), x);
    }

    fn heisenberg_rep(l: &Dgla, v: &[Q]) -> SparseMatrix {
        // x -> E12, y -> E23, z -> E13
        SparseMatrix::from_triplets(3, 3, [(0, 1, v[0].clone()), (1, 2, v[1].clone()), (0, 2, v[2].clone())])
            .filter(|_, _| l.dim() == 3)
    }

    #[test]
    fn bch_matches_matrix_logarithm() {
        let l = Dgla::heisenberg();
        let ring = ArtinAlgebra::new(&["s", "t"], &[vec![2, 0], vec![0, 2]]).unwrap();
        let ext = extend_scalars(&l, &ring);
        let s = ring.var("s").unwrap();
        let t = ring.var("t").unwrap();
        let x = ext.lift(&l.basis(0), &s);
        let y = ext.add(&ext.lift(&l.basis(1), &t), &ext.lift(&l.basis(0), &t.scale(&q(2))));
        let z = ext.bch(&x, &y).unwrap();
        let rep = |e: &Ext<Vector>| -> AOperator { e.map(|v| heisenberg_rep(&l, v)) };
        let prod = op_compose(&op_exp(&rep(&x)).unwrap(), &op_exp(&rep(&y)).unwrap());
        assert_eq!(rep(&z), op_log(&prod).unwrap());
        let expected = ext.add(&ext.add(&x, &y), &ext.scale(&ext.bracket(&x, &y), &qr(1, 2)));
        assert_eq!(z, expected);
        assert_eq!(ext.bch(&x, &ext.zero()).unwrap(), x);
        assert_eq!(ext.bch(&ext.zero(), &y).unwrap(), y);
    }

    #[test]
    fn bch_of_commuting_elements_is_sum() {
        let l = Dgla::sl2();
        let ring = ArtinAlgebra::truncated("t", 4);
        let ext = extend_scalars(&l, &ring);
        let t = ring.var("t").unwrap();
        let x = ext.lift(&l.basis(1), &t);
        let y = ext.lift(&l.basis(1), &t.pow(2).scale(&q(5)));
        assert_eq!(ext.bch(&x, &y).unwrap(), ext.add(&x, &y));
    }

    #[test]
    fn gauge_is_a_group_action() {
        let space = GradedSpace::from_degrees([("a", 0), ("b", 0), ("c", 1), ("e", 1)]).unwrap();
        let dv = SparseMatrix::from_triplets(4, 4, [(2, 0, q(1)), (3, 1, q(1))]);
        let end = EndDgla::new(space, dv).unwrap();
        let ring = ArtinAlgebra::truncated("t", 4);
        let ext = extend_scalars(&end, &ring);
        let t = ring.var("t").unwrap();
        let t2 = t.pow(2);
        let a = ext.add(&ext.lift(&end.elementary(0, 1), &t), &ext.lift(&end.elementary(2, 3), &t2));
        let b = ext.add(&ext.lift(&end.elementary(1, 0), &t), &ext.lift(&end.elementary(3, 2), &t.scale(&q(-2))));
        let x = ext.gauge_act(&b, &ext.zero()).unwrap();
        assert!(ext.mc_check(&x).unwrap().0);
        let lhs = ext.gauge_act(&a, &ext.gauge_act(&b, &x).unwrap()).unwrap();
        let rhs = ext.gauge_act(&ext.bch(&a, &b).unwrap(), &x).unwrap();
        assert_eq!(lhs, rhs);
        assert!(ext.mc_check(&lhs).unwrap().0);
    }
}
