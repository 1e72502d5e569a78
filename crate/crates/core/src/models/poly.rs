//! Polyvector-field models acting on a form model by contraction.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::cartan::CartanCandidate;
use crate::dgla::{check_dgla, Dgla};
use crate::endo::{AOperator, EndDgla};
use crate::error::{Error, Result};
use crate::lie::{Ext, GradedLie};
use crate::linalg::{add_scaled, span_dim, zero_vector, SparseMatrix, Vector};
use crate::report::Report;
use crate::scalar::{q, sign_pow, Q};

use super::{BigradedModel, SparseVec};

/// Bidegree `(a, b)` of the Kodaira-Spencer part: one vector field, one `dz̄`.
pub const KS_BIDEGREE: (i32, i32) = (-1, 1);

/// Polyvector fields with structure constants, and the contraction of each
/// basis element as an operator on forms. The degree of `ξ` here is one more
/// than the degree of `i_ξ`.
#[derive(Clone, Debug)]
pub struct PolyModel {
    forms: Arc<BigradedModel>,
    end: Arc<EndDgla>,
    poly: Dgla,
    op_bidegrees: Vec<(i32, i32)>,
    contractions: Vec<SparseMatrix>,
    wedge: Option<BTreeMap<(usize, usize), SparseVec>>,
    require_l_injective: bool,
}

impl PolyModel {
    pub fn new(
        forms: Arc<BigradedModel>,
        poly: Dgla,
        op_bidegrees: Vec<(i32, i32)>,
        contractions: Vec<SparseMatrix>,
        wedge: Option<BTreeMap<(usize, usize), SparseVec>>,
        require_l_injective: bool,
    ) -> Result<Self> {
        let n = poly.dim();
        if op_bidegrees.len() != n || contractions.len() != n {
            return Err(Error::Dimension(format!("{n} polyvector basis elements need {n} contractions")));
        }
        let end = Arc::new(forms.end_dgla());
        for (k, op) in contractions.iter().enumerate() {
            if op.rows() != forms.dim() || op.cols() != forms.dim() {
                return Err(Error::Dimension(format!("contraction of {} has the wrong size", poly.basis_name(k))));
            }
            let (a, b) = op_bidegrees[k];
            if a + b + 1 != poly.basis_degree(k) {
                return Err(Error::Degree(format!(
                    "{} has degree {} but its operator bidegree is ({a},{b})",
                    poly.basis_name(k),
                    poly.basis_degree(k)
                )));
            }
            for (i, j, _) in op.entries() {
                if end.entry_bidegree(i, j) != Some((a, b)) {
                    return Err(Error::Degree(format!(
                        "contraction of {} has an entry {}<-{} outside bidegree ({a},{b})",
                        poly.basis_name(k),
                        forms.name(i),
                        forms.name(j)
                    )));
                }
            }
        }
        Ok(PolyModel { forms, end, poly, op_bidegrees, contractions, wedge, require_l_injective })
    }

    pub fn forms(&self) -> &Arc<BigradedModel> {
        &self.forms
    }

    pub fn end(&self) -> &Arc<EndDgla> {
        &self.end
    }

    pub fn poly(&self) -> &Dgla {
        &self.poly
    }

    pub fn dim(&self) -> usize {
        self.poly.dim()
    }

    pub fn name(&self, k: usize) -> String {
        self.poly.basis_name(k)
    }

    pub fn op_bidegree(&self, k: usize) -> (i32, i32) {
        self.op_bidegrees[k]
    }

    pub fn requires_l_injective(&self) -> bool {
        self.require_l_injective
    }

    pub fn has_wedge(&self) -> bool {
        self.wedge.is_some()
    }

    /// Replaces one contraction image, keeping everything else.
    pub fn with_contraction(mut self, k: usize, op: SparseMatrix) -> Self {
        self.contractions[k] = op;
        self
    }

    /// Basis indices of `Poly` in degree `k`.
    pub fn indices_in_degree(&self, k: i32) -> Vec<usize> {
        self.poly.space().indices_in_degree(k)
    }

    /// Whether every term of `x` has operator bidegree `(-1, 1)`.
    pub fn is_kodaira_spencer(&self, x: &[Q]) -> bool {
        x.iter().enumerate().all(|(k, c)| c.is_zero() || self.op_bidegrees[k] == KS_BIDEGREE)
    }

    pub fn sn_bracket(&self, x: &Vector, y: &Vector) -> Vector {
        self.poly.bracket(x, y)
    }

    pub fn wedge(&self, x: &[Q], y: &[Q]) -> Option<Vector> {
        let table = self.wedge.as_ref()?;
        let mut out = zero_vector(self.dim());
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                if let Some(v) = table.get(&(i, j)) {
                    for (k, c) in v {
                        out[*k] += a * b * c;
                    }
                }
            }
        }
        Some(out)
    }

    pub fn basis_contraction(&self, k: usize) -> &SparseMatrix {
        &self.contractions[k]
    }

    pub fn contraction(&self, x: &[Q]) -> SparseMatrix {
        let n = self.forms.dim();
        let mut acc = SparseMatrix::zeros(n, n);
        for (k, c) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            acc = acc.add(&self.contractions[k].scale(c));
        }
        acc
    }

    /// Contraction extended over an Artin ring.
    pub fn contraction_ext(&self, x: &Ext<Vector>) -> AOperator {
        x.map(|v| self.contraction(v))
    }

    /// `i_{ξ_1} ∘ … ∘ i_{ξ_n}`.
    pub fn iterated_contraction(&self, xs: &[Vector]) -> SparseMatrix {
        let mut acc = SparseMatrix::identity(self.forms.dim());
        for x in xs.iter().rev() {
            acc = self.contraction(x).compose(&acc);
        }
        acc
    }

    /// Holomorphic Lie derivative `[∂, i_ξ]`.
    pub fn lie_derivative(&self, x: &[Q]) -> SparseMatrix {
        self.end.bracket(&self.forms.del().clone(), &self.contraction(x))
    }

    pub fn cartan_candidate(&self) -> Result<CartanCandidate<Dgla, EndDgla>> {
        CartanCandidate::new(self.poly.clone(), (*self.end).clone(), self.contractions.clone())
    }

    fn pair(&self, a: usize, b: usize) -> String {
        format!("({},{})", self.name(a), self.name(b))
    }

    /// The odd Poisson identity
    /// `[ξ, η∧ζ] = [ξ,η]∧ζ + (-1)^{(|ξ|-1)|η|} η∧[ξ,ζ]` in the grading where
    /// the wedge has degree 0, checked on basis triples.
    pub fn check_odd_poisson(&self) -> Report {
        let mut r = Report::new();
        if self.wedge.is_none() {
            return r;
        }
        let n = self.dim();
        let g = |k: usize| self.poly.basis_degree(k) - 1;
        for a in 0..n {
            let xa = self.poly.basis(a);
            for b in 0..n {
                let xb = self.poly.basis(b);
                for c in 0..n {
                    let xc = self.poly.basis(c);
                    let lhs = self.sn_bracket(&xa, &self.wedge(&xb, &xc).expect("wedge"));
                    let mut rhs = self.wedge(&self.sn_bracket(&xa, &xb), &xc).expect("wedge");
                    let second = self.wedge(&xb, &self.sn_bracket(&xa, &xc)).expect("wedge");
                    add_scaled(&mut rhs, &second, &q(sign_pow(((g(a) - 1) * g(b)) as i64)));
                    if lhs != rhs {
                        r.fail("odd-poisson", format!("({},{},{})", self.name(a), self.name(b), self.name(c)));
                    }
                }
            }
        }
        r
    }

    /// `i_{Dξ} = -[∂̄, i_ξ]`, `i_{[ξ,η]} = [i_ξ, [∂, i_η]]`, `[i_ξ, i_η] = 0`,
    /// multiplicativity when a wedge is present, and injectivity of `l` when
    /// the model requests it.
    pub fn cartan_identities_check(&self) -> Report {
        let mut r = check_dgla(self.poly.data());
        let n = self.dim();
        let end = &*self.end;
        let del = self.forms.del().clone();
        let delbar = self.forms.delbar().clone();
        let basis: Vec<Vector> = (0..n).map(|k| self.poly.basis(k)).collect();
        let lie: Vec<SparseMatrix> = (0..n).map(|k| end.bracket(&del, &self.contractions[k])).collect();
        for a in 0..n {
            let lhs = self.contraction(&self.poly.differential(&basis[a]));
            let rhs = end.bracket(&delbar, &self.contractions[a]);
            if !lhs.add(&rhs).is_zero() {
                r.fail("lemma-dbar", self.name(a));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let lhs = self.contraction(&self.sn_bracket(&basis[a], &basis[b]));
                let rhs = end.bracket(&self.contractions[a], &lie[b]);
                if !lhs.sub(&rhs).is_zero() {
                    r.fail("lemma-bracket", self.pair(a, b));
                }
                if a <= b && !end.bracket(&self.contractions[a], &self.contractions[b]).is_zero() {
                    r.fail("lemma-commute", self.pair(a, b));
                }
                if let Some(w) = self.wedge(&basis[a], &basis[b]) {
                    if !self.contraction(&w).sub(&self.contractions[a].compose(&self.contractions[b])).is_zero() {
                        r.fail("multiplicative", self.pair(a, b));
                    }
                }
            }
        }
        r.merge(self.check_odd_poisson());
        if self.require_l_injective {
            let flat: Vec<Vector> = lie.iter().map(|m| m.entries().fold(zero_vector(end.size() * end.size()), |mut v, (i, j, c)| {
                v[i * end.size() + j] = c.clone();
                v
            })).collect();
            if span_dim(&flat, end.size() * end.size()) < n {
                r.fail("l-injective", format!("rank {} < {n}", span_dim(&flat, end.size() * end.size())));
            }
        }
        r
    }

    /// Degree-1 elements whose Maurer-Cartan residual vanishes identically,
    /// i.e. `D = 0` and all brackets vanish on `Poly^1`.
    pub fn degree_one_unobstructed(&self) -> bool {
        let idx = self.indices_in_degree(1);
        idx.iter().all(|&a| {
            let x = self.poly.basis(a);
            self.poly.is_zero(&self.poly.differential(&x))
                && idx.iter().all(|&b| self.poly.is_zero(&self.poly.bracket(&x, &self.poly.basis(b))))
        })
    }
}
