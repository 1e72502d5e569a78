//! Cartan and weak Cartan homotopies `i ∈ Hom^{-1}(L, M)`, the induced
//! morphism `l_a = d i_a + i_{da}`, the lift `a ↦ (a, i_a)` into the cone of
//! `l`, and `Φ(a) = (l_a, i_a)` into the cone of a subalgebra inclusion.

use std::sync::Arc;

use crate::artin::ArtinAlgebra;
use crate::cone::{nested_bracket_sum, Cone, ConeElem, McChi};
use crate::endo::{EndDgla, SubEnd};
use crate::error::{Error, Result};
use crate::lie::{extend_scalars, Ext, GradedLie, ScalarExtension};
use crate::linalg::SparseMatrix;
use crate::report::Report;

/// A degree `-1` linear map `L -> M`, stored by the images of the basis of `L`.
#[derive(Clone)]
pub struct CartanCandidate<L: GradedLie, M: GradedLie> {
    source: L,
    target: M,
    images: Vec<M::Elem>,
}

impl<L: GradedLie, M: GradedLie> CartanCandidate<L, M> {
    pub fn new(source: L, target: M, images: Vec<M::Elem>) -> Result<Self> {
        if images.len() != source.dim() {
            return Err(Error::Dimension(format!("{} images for a source of dimension {}", images.len(), source.dim())));
        }
        for (k, img) in images.iter().enumerate() {
            for (d, _) in target.homogeneous_parts(img) {
                if d != source.basis_degree(k) - 1 {
                    return Err(Error::Degree(format!(
                        "i({}) has a component of degree {d}, expected {}",
                        source.basis_name(k),
                        source.basis_degree(k) - 1
                    )));
                }
            }
        }
        Ok(CartanCandidate { source, target, images })
    }

    pub fn source(&self) -> &L {
        &self.source
    }

    pub fn target(&self) -> &M {
        &self.target
    }

    pub fn images(&self) -> &[M::Elem] {
        &self.images
    }

    /// Replaces one basis image; used by mutation tests.
    pub fn with_image(mut self, k: usize, img: M::Elem) -> Self {
        self.images[k] = img;
        self
    }

    pub fn i(&self, a: &L::Elem) -> M::Elem {
        let mut acc = self.target.zero();
        for (k, c) in self.source.coordinates(a) {
            acc = self.target.add(&acc, &self.target.scale(&self.images[k], &c));
        }
        acc
    }

    /// `l_a = d i_a + i_{da}`.
    pub fn l(&self, a: &L::Elem) -> M::Elem {
        self.target.add(&self.target.differential(&self.i(a)), &self.i(&self.source.differential(a)))
    }

    fn name(&self, k: usize) -> String {
        self.source.basis_name(k)
    }

    fn check_bracket_rule(&self, report: &mut Report) {
        let n = self.source.dim();
        let ls: Vec<M::Elem> = (0..n).map(|k| self.l(&self.source.basis(k))).collect();
        for a in 0..n {
            for b in 0..n {
                let ab = self.source.bracket(&self.source.basis(a), &self.source.basis(b));
                let lhs = self.i(&ab);
                let rhs = self.target.bracket(&self.images[a], &ls[b]);
                if !self.target.is_zero(&self.target.sub(&lhs, &rhs)) {
                    report.fail("cartan-bracket", format!("({},{})", self.name(a), self.name(b)));
                }
            }
        }
    }

    /// `i_{[a,b]} = [i_a, l_b]` and `[i_a, i_b] = 0` on all basis pairs.
    pub fn check_cartan(&self) -> Report {
        let mut report = Report::new();
        self.check_bracket_rule(&mut report);
        let n = self.source.dim();
        for a in 0..n {
            for b in a..n {
                if !self.target.is_zero(&self.target.bracket(&self.images[a], &self.images[b])) {
                    report.fail("cartan-commute", format!("({},{})", self.name(a), self.name(b)));
                }
            }
        }
        report
    }

    /// `i_{[a,b]} = [i_a, l_b]` on pairs and the symmetrised triple identity
    /// `Σ_{S_3} ±[i_{x_σ1}, [i_{x_σ2}, l_{x_σ3}]] = 0` on basis multisets.
    pub fn check_weak_cartan(&self) -> Report {
        let mut report = Report::new();
        self.check_bracket_rule(&mut report);
        let n = self.source.dim();
        let ls: Vec<M::Elem> = (0..n).map(|k| self.l(&self.source.basis(k))).collect();
        for a in 0..n {
            for b in a..n {
                for c in b..n {
                    let idx = [a, b, c];
                    let ms: Vec<M::Elem> = idx.iter().map(|&k| self.images[k].clone()).collect();
                    let ys: Vec<M::Elem> = idx.iter().map(|&k| ls[k].clone()).collect();
                    // Koszul signs come from the degrees of the inputs x_k, with
                    // (i_x, l_x) read as the cone element (x, i_x) of degree deg x.
                    let degrees: Vec<i32> = idx.iter().map(|&k| self.source.basis_degree(k)).collect();
                    if !self.target.is_zero(&nested_bracket_sum(&self.target, &ms, &ys, &degrees)) {
                        report.fail(
                            "weak-cartan-triple",
                            format!("({},{},{})", self.name(a), self.name(b), self.name(c)),
                        );
                    }
                }
            }
        }
        report
    }

    /// `l` commutes with the differentials and preserves brackets.
    pub fn check_l_morphism(&self) -> Report {
        let mut report = Report::new();
        let n = self.source.dim();
        for a in 0..n {
            let x = self.source.basis(a);
            let lhs = self.l(&self.source.differential(&x));
            let rhs = self.target.differential(&self.l(&x));
            if !self.target.is_zero(&self.target.sub(&lhs, &rhs)) {
                report.fail("l-differential", self.name(a));
            }
            for b in 0..n {
                let y = self.source.basis(b);
                let lhs = self.l(&self.source.bracket(&x, &y));
                let rhs = self.target.bracket(&self.l(&x), &self.l(&y));
                if !self.target.is_zero(&self.target.sub(&lhs, &rhs)) {
                    report.fail("l-bracket", format!("({},{})", self.name(a), self.name(b)));
                }
            }
        }
        report
    }

    /// `l'_a - i_{da} - d i_a = 0` for an independently given `l'`.
    pub fn check_homotopy(&self, l: impl Fn(&L::Elem) -> M::Elem) -> Report {
        let mut report = Report::new();
        for a in 0..self.source.dim() {
            let x = self.source.basis(a);
            let r = self.target.sub(&l(&x), &self.l(&x));
            if !self.target.is_zero(&r) {
                report.fail("homotopy", self.name(a));
            }
        }
        report
    }

    /// `g ∘ i` for a DGLA morphism `g: M -> M'`.
    pub fn compose<N: GradedLie>(&self, target: N, g: impl Fn(&M::Elem) -> N::Elem) -> Result<CartanCandidate<L, N>>
    where
        L: Clone,
    {
        let images = self.images.iter().map(g).collect();
        CartanCandidate::new(self.source.clone(), target, images)
    }

    /// `i ⊗ Id: L ⊗ A -> M ⊗ A` for an Artin ring `A` in degree 0.
    pub fn extend_scalars<'a>(
        &'a self,
        ring: &Arc<ArtinAlgebra>,
    ) -> Result<CartanCandidate<ScalarExtension<'a, L>, ScalarExtension<'a, M>>> {
        let lx = extend_scalars(&self.source, ring);
        let mx = extend_scalars(&self.target, ring);
        let rd = ring.dim();
        let images = (0..lx.dim()).map(|k| mx.lift_monomial(&self.images[k / rd], k % rd)).collect();
        CartanCandidate::new(lx, mx, images)
    }
}

impl<L, M> CartanCandidate<L, M>
where
    L: GradedLie + Clone + 'static,
    M: GradedLie + Clone + 'static,
    M::Elem: 'static,
    L::Elem: 'static,
{
    fn induced_cone(&self) -> Cone<L, M> {
        let me = self.clone();
        Cone::new(self.source.clone(), self.target.clone(), move |a: &L::Elem| me.l(a))
    }

    /// The linear map `a ↦ (a, i_a)` into the cone of `l`; requires the weak
    /// Cartan identities, and checks compatibility with `μ_1`, `μ_2`, `μ_3`.
    pub fn lift_to_cone(&self) -> Result<ConeLift<L, M>> {
        let weak = self.check_weak_cartan();
        if !weak.passed() {
            return Err(Error::Precondition(format!("not a weak Cartan homotopy: {}", weak.lines().join("; "))));
        }
        let lift = ConeLift { candidate: self.clone(), cone: self.induced_cone() };
        let r = verify_linear_morphism(&self.source, &lift.cone, |a| lift.apply(a));
        if !r.passed() {
            return Err(Error::Precondition(format!("lift is not an L-infinity morphism: {}", r.lines().join("; "))));
        }
        Ok(lift)
    }

    /// `Φ(a) = (l_a, i_a)` into the cone of the inclusion of `sub` into `M`;
    /// requires the strict Cartan identities, closure of `sub` and `l(L) ⊆ sub`.
    pub fn phi_morphism<S: Subalgebra<M>>(&self, sub: &S) -> Result<PhiMorphism<L, M>> {
        let strict = self.check_cartan();
        if !strict.passed() {
            return Err(Error::Precondition(format!("not a Cartan homotopy: {}", strict.lines().join("; "))));
        }
        let closed = sub.check_closed();
        if !closed.passed() {
            return Err(Error::Precondition(format!("subalgebra is not closed: {}", closed.lines().join("; "))));
        }
        for k in 0..self.source.dim() {
            if !sub.contains(&self.l(&self.source.basis(k))) {
                return Err(Error::Precondition(format!("l({}) lies outside the subalgebra", self.name(k))));
            }
        }
        let m = self.target.clone();
        let cone = Cone::new(m.clone(), m, |x: &M::Elem| x.clone());
        let phi = PhiMorphism { candidate: self.clone(), cone };
        let r = verify_linear_morphism(&self.source, &phi.cone, |a| phi.apply(a));
        if !r.passed() {
            return Err(Error::Precondition(format!("Φ is not an L-infinity morphism: {}", r.lines().join("; "))));
        }
        Ok(phi)
    }
}

/// Checks `f(da) = μ_1 f(a)`, `f([a,b]) = μ_2(f a, f b)` and `μ_3(f a, f b, f c) = 0`
/// on basis tuples; higher arities follow from the triple identity.
fn verify_linear_morphism<L: GradedLie, C: GradedLie, M: GradedLie>(
    source: &L,
    cone: &Cone<C, M>,
    f: impl Fn(&L::Elem) -> ConeElem<C::Elem, M::Elem>,
) -> Report
where
    C::Elem: PartialEq,
{
    let br = cone.brackets();
    let n = source.dim();
    let images: Vec<_> = (0..n).map(|k| f(&source.basis(k))).collect();
    let mut report = Report::new();
    for a in 0..n {
        let lhs = f(&source.differential(&source.basis(a)));
        if !br.is_zero(&br.sub(&lhs, &br.mu1(&images[a]))) {
            report.fail("morphism-mu1", source.basis_name(a));
        }
        for b in 0..n {
            let lhs = f(&source.bracket(&source.basis(a), &source.basis(b)));
            if !br.is_zero(&br.sub(&lhs, &br.mu2(&images[a], &images[b]))) {
                report.fail("morphism-mu2", format!("({},{})", source.basis_name(a), source.basis_name(b)));
            }
        }
        for b in a..n {
            for c in b..n {
                let v = br.mu(&[images[a].clone(), images[b].clone(), images[c].clone()]);
                if !br.is_zero(&v) {
                    report.fail(
                        "morphism-mu3",
                        format!("({},{},{})", source.basis_name(a), source.basis_name(b), source.basis_name(c)),
                    );
                }
            }
        }
    }
    report
}

/// `a ↦ (a, i_a)`, a linear L-infinity morphism into the cone of `l`.
pub struct ConeLift<L: GradedLie, M: GradedLie> {
    candidate: CartanCandidate<L, M>,
    cone: Cone<L, M>,
}

impl<L: GradedLie, M: GradedLie> ConeLift<L, M> {
    pub fn apply(&self, a: &L::Elem) -> ConeElem<L::Elem, M::Elem> {
        ConeElem { l: a.clone(), m: self.candidate.i(a) }
    }

    pub fn cone(&self) -> &Cone<L, M> {
        &self.cone
    }

    /// `ξ ↦ (ξ, e^{i_ξ})`.
    pub fn mc_map(&self, xi: &Ext<L::Elem>) -> McChi<L::Elem, M::Elem> {
        McChi { x: xi.clone(), a: xi.map(|c| self.candidate.i(c)) }
    }
}

/// `a ↦ (l_a, i_a)`; the `L`-part is stored as an element of the ambient `M`.
pub struct PhiMorphism<L: GradedLie, M: GradedLie> {
    candidate: CartanCandidate<L, M>,
    cone: Cone<M, M>,
}

impl<L: GradedLie, M: GradedLie> PhiMorphism<L, M> {
    pub fn apply(&self, a: &L::Elem) -> ConeElem<M::Elem, M::Elem> {
        ConeElem { l: self.candidate.l(a), m: self.candidate.i(a) }
    }

    pub fn candidate(&self) -> &CartanCandidate<L, M> {
        &self.candidate
    }

    /// The cone of `id_M`, whose brackets restrict to those of the subalgebra cone.
    pub fn cone(&self) -> &Cone<M, M> {
        &self.cone
    }

    /// `ξ ↦ (l_ξ, e^{i_ξ})`.
    pub fn mc_map(&self, xi: &Ext<L::Elem>) -> McChi<M::Elem, M::Elem> {
        McChi { x: xi.map(|c| self.candidate.l(c)), a: xi.map(|c| self.candidate.i(c)) }
    }
}

/// A sub-DGLA given by a membership test.
pub trait Subalgebra<M: GradedLie> {
    fn contains(&self, x: &M::Elem) -> bool;
    fn check_closed(&self) -> Report;
}

/// `M` itself.
pub struct Whole;

impl<M: GradedLie> Subalgebra<M> for Whole {
    fn contains(&self, _: &M::Elem) -> bool {
        true
    }

    fn check_closed(&self) -> Report {
        Report::new()
    }
}

impl Subalgebra<EndDgla> for SubEnd {
    fn contains(&self, x: &SparseMatrix) -> bool {
        SubEnd::contains(self, x)
    }

    fn check_closed(&self) -> Report {
        SubEnd::check_closed(self)
    }
}

/// Example of a weak but in general not strict Cartan homotopy: the identity
/// `L[-1] -> L`, where `L[-1]` carries the zero bracket.
pub fn shift_identity(l: &crate::dgla::Dgla) -> Result<CartanCandidate<crate::dgla::Dgla, crate::dgla::Dgla>> {
    let shifted = l.shifted_abelian();
    let images = (0..l.dim()).map(|k| l.basis(k)).collect();
    CartanCandidate::new(shifted, l.clone(), images)
}
