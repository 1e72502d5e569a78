//! Finite bigraded models of a form algebra with `∂`, `∂̄` and a
//! graded-commutative product, together with polyvector-field models acting
//! on them by contraction.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::endo::EndDgla;
use crate::error::{Error, Result};
use crate::graded::{Complex, GradedSpace};
use crate::io::format_combination;
use crate::linalg::{
    add_scaled, in_span, intersect_spans, is_zero_vector, span_basis, zero_vector, Matrix, PivotOrder, SparseMatrix,
    Vector,
};
use crate::report::Report;
use crate::scalar::{q, sign_pow, Q};

pub mod dotsquare;
pub mod exterior;
pub mod poly;
pub mod torus;

pub use dotsquare::{build_dot_square_algebra, parse_model, random_spec, Cell, DotSquareSpec, ModelFile};
pub use poly::{PolyModel, KS_BIDEGREE};
pub use torus::build_torus_model;

pub type SparseVec = Vec<(usize, Q)>;

/// Bigraded commutative algebra with anticommuting differentials of
/// bidegree `(1,0)` and `(0,1)`.
#[derive(Clone, Debug)]
pub struct BigradedModel {
    space: GradedSpace,
    del: SparseMatrix,
    delbar: SparseMatrix,
    products: BTreeMap<(usize, usize), SparseVec>,
    unit: usize,
}

impl BigradedModel {
    /// Validates every invariant; the error lists the failing checks.
    pub fn new(
        space: GradedSpace,
        del: SparseMatrix,
        delbar: SparseMatrix,
        products: BTreeMap<(usize, usize), SparseVec>,
        unit: usize,
    ) -> Result<Self> {
        let n = space.dim();
        if (0..n).any(|i| space.bidegree(i).is_none()) {
            return Err(Error::Invalid("every basis element of a model needs a bidegree".into()));
        }
        for m in [&del, &delbar] {
            if m.rows() != n || m.cols() != n {
                return Err(Error::Dimension("differentials must be square on the space".into()));
            }
        }
        if unit >= n {
            return Err(Error::Invalid("unit index out of range".into()));
        }
        let model = BigradedModel { space, del, delbar, products, unit };
        let r = model.check_invariants();
        if !r.passed() {
            return Err(Error::Invalid(format!("model invariants fail: {}", r.lines().join("; "))));
        }
        Ok(model)
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn del(&self) -> &SparseMatrix {
        &self.del
    }

    pub fn delbar(&self) -> &SparseMatrix {
        &self.delbar
    }

    /// `d = ∂ + ∂̄`.
    pub fn d(&self) -> SparseMatrix {
        self.del.add(&self.delbar)
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn bidegree(&self, i: usize) -> (i32, i32) {
        self.space.bidegree(i).expect("models are bigraded")
    }

    pub fn name(&self, i: usize) -> &str {
        self.space.name(i)
    }

    pub fn max_p(&self) -> i32 {
        (0..self.dim()).map(|i| self.bidegree(i).0).max().unwrap_or(0)
    }

    pub fn format(&self, v: &[Q]) -> String {
        let s = format_combination(v, |i| self.space.name(i).to_string());
        if s.is_empty() {
            "0".into()
        } else {
            s
        }
    }

    pub fn basis_product(&self, i: usize, j: usize) -> Vector {
        let mut v = zero_vector(self.dim());
        if let Some(p) = self.products.get(&(i, j)) {
            for (k, c) in p {
                v[*k] += c;
            }
        }
        v
    }

    pub fn multiply(&self, x: &[Q], y: &[Q]) -> Vector {
        let mut out = zero_vector(self.dim());
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                add_scaled(&mut out, &self.basis_product(i, j), &(a * b));
            }
        }
        out
    }

    pub fn complex(&self) -> Complex {
        Complex::new(self.space.clone(), self.d()).expect("validated model")
    }

    pub fn end_dgla(&self) -> EndDgla {
        EndDgla::from_complex(&self.complex())
    }

    fn unit_vector(&self, i: usize) -> Vector {
        crate::linalg::unit_vector(self.dim(), i)
    }

    /// Every invariant of the model, checked on basis elements.
    pub fn check_invariants(&self) -> Report {
        let mut r = Report::new();
        let n = self.dim();
        for (name, m, shift) in [("del", &self.del, (1, 0)), ("delbar", &self.delbar, (0, 1))] {
            for (i, j, _) in m.entries() {
                let (pi, qi) = self.bidegree(i);
                let (pj, qj) = self.bidegree(j);
                if (pi - pj, qi - qj) != shift {
                    r.fail(format!("{name}-bidegree"), format!("{}->{}", self.name(j), self.name(i)));
                }
            }
            let sq = m.compose(m);
            for (_, j, _) in sq.entries() {
                r.fail(format!("{name}-squared"), self.name(j).to_string());
            }
        }
        let anti = self.del.compose(&self.delbar).add(&self.delbar.compose(&self.del));
        for (_, j, _) in anti.entries() {
            r.fail("anticommute", self.name(j).to_string());
        }
        for i in 0..n {
            let ui = self.basis_product(self.unit, i);
            if ui != self.unit_vector(i) {
                r.fail("unit", self.name(i).to_string());
            }
        }
        for (&(i, j), v) in &self.products {
            let (pi, qi) = self.bidegree(i);
            let (pj, qj) = self.bidegree(j);
            for (k, c) in v {
                if !c.is_zero() && self.bidegree(*k) != (pi + pj, qi + qj) {
                    r.fail("product-bidegree", format!("({},{})", self.name(i), self.name(j)));
                }
            }
        }
        for i in 0..n {
            let di = self.space.degree(i);
            for j in 0..n {
                let dj = self.space.degree(j);
                let xy = self.basis_product(i, j);
                let yx = self.basis_product(j, i);
                if xy != crate::linalg::vec_scale(&yx, &q(sign_pow((di * dj) as i64))) {
                    r.fail("commutativity", format!("({},{})", self.name(i), self.name(j)));
                }
                for (name, m) in [("leibniz-del", &self.del), ("leibniz-delbar", &self.delbar)] {
                    let lhs = m.apply(&xy);
                    let mut rhs = self.multiply(&m.apply(&self.unit_vector(i)), &self.unit_vector(j));
                    let second = self.multiply(&self.unit_vector(i), &m.apply(&self.unit_vector(j)));
                    add_scaled(&mut rhs, &second, &q(sign_pow(di as i64)));
                    if lhs != rhs {
                        r.fail(name, format!("({},{})", self.name(i), self.name(j)));
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let xy = self.basis_product(i, j);
                for k in 0..n {
                    let lhs = self.multiply(&xy, &self.unit_vector(k));
                    let rhs = self.multiply(&self.unit_vector(i), &self.basis_product(j, k));
                    if lhs != rhs {
                        r.fail("associativity", format!("({},{},{})", self.name(i), self.name(j), self.name(k)));
                    }
                }
            }
        }
        r
    }

    fn columns(&self, m: &SparseMatrix, idx: &[usize]) -> Vec<Vector> {
        idx.iter().map(|&j| m.apply(&self.unit_vector(j))).collect()
    }

    fn kernel_in(&self, maps: &[&SparseMatrix], idx: &[usize]) -> Vec<Vector> {
        let n = self.dim();
        if idx.is_empty() {
            return Vec::new();
        }
        let mut rows_total = Vec::new();
        for m in maps {
            let cols = self.columns(m, idx);
            for r in 0..n {
                let row: Vector = cols.iter().map(|c| c[r].clone()).collect();
                if row.iter().any(|x| !x.is_zero()) {
                    rows_total.push(row);
                }
            }
        }
        let basis: Vec<Vector> = if rows_total.is_empty() {
            (0..idx.len()).map(|i| crate::linalg::unit_vector(idx.len(), i)).collect()
        } else {
            Matrix::from_rows(rows_total, idx.len()).nullspace(PivotOrder::Natural)
        };
        basis
            .into_iter()
            .map(|c| {
                let mut v = zero_vector(n);
                for (a, &j) in idx.iter().enumerate() {
                    v[j] = c[a].clone();
                }
                v
            })
            .collect()
    }

    pub fn indices_in_bidegree(&self, p: i32, qq: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.bidegree(i) == (p, qq)).collect()
    }

    pub fn bidegrees(&self) -> Vec<(i32, i32)> {
        let mut b: Vec<(i32, i32)> = (0..self.dim()).map(|i| self.bidegree(i)).collect();
        b.sort();
        b.dedup();
        b
    }

    /// Basis of `ker ∂`.
    pub fn ker_del(&self) -> Vec<Vector> {
        let mut out = Vec::new();
        for (p, qq) in self.bidegrees() {
            out.extend(self.kernel_in(&[&self.del], &self.indices_in_bidegree(p, qq)));
        }
        out
    }

    /// Basis of `∂A`.
    pub fn im_del(&self) -> Vec<Vector> {
        span_basis(&self.columns(&self.del, &(0..self.dim()).collect::<Vec<_>>()), self.dim())
    }

    /// Basis of `ker ∂ ∩ ker ∂̄` in bidegree `(p, q)`.
    pub fn closed_in_bidegree(&self, p: i32, qq: i32) -> Vec<Vector> {
        self.kernel_in(&[&self.del, &self.delbar], &self.indices_in_bidegree(p, qq))
    }

    /// Basis of `im ∂∂̄` in bidegree `(p, q)`.
    pub fn ddbar_exact_in_bidegree(&self, p: i32, qq: i32) -> Vec<Vector> {
        let ddb = self.del.compose(&self.delbar);
        span_basis(&self.columns(&ddb, &self.indices_in_bidegree(p - 1, qq - 1)), self.dim())
    }
}

/// Outcome of the `∂∂̄`-lemma check.
#[derive(Clone, Debug, PartialEq)]
pub struct LemmaCheck {
    pub holds: bool,
    pub witness: Option<Vector>,
    pub report: Report,
}

/// `ker ∂ ∩ ker ∂̄ ∩ im d ⊆ im ∂∂̄`, checked in each total degree since `im d`
/// is not bihomogeneous.
pub fn check_deldelbar_lemma(m: &BigradedModel) -> LemmaCheck {
    let n = m.dim();
    let d = m.d();
    let ddb = m.del.compose(&m.delbar);
    let mut report = Report::new();
    let mut witness = None;
    for k in m.space.degrees() {
        let idx = m.space.indices_in_degree(k);
        let closed = m.kernel_in(&[&m.del, &m.delbar], &idx);
        let exact = span_basis(&m.columns(&d, &m.space.indices_in_degree(k - 1)), n);
        let ddbar = span_basis(&m.columns(&ddb, &m.space.indices_in_degree(k - 2)), n);
        for v in intersect_spans(&closed, &exact, n) {
            if !in_span(&ddbar, &v, n) {
                report.fail("deldelbar-lemma", m.format(&v));
                if witness.is_none() {
                    witness = Some(v);
                }
                break;
            }
        }
    }
    LemmaCheck { holds: report.passed(), witness, report }
}

/// Re-verifies a lemma witness: closed for both differentials, `d`-exact,
/// and not `∂∂̄`-exact.
pub fn is_lemma_violation(m: &BigradedModel, v: &[Q]) -> bool {
    let n = m.dim();
    if is_zero_vector(v) || !is_zero_vector(&m.del.apply(v)) || !is_zero_vector(&m.delbar.apply(v)) {
        return false;
    }
    let all: Vec<usize> = (0..n).collect();
    let exact = m.columns(&m.d(), &all);
    let ddbar = m.columns(&m.del.compose(&m.delbar), &all);
    in_span(&exact, v, n) && !in_span(&ddbar, v, n)
}
