//! The endomorphism DGLA `Hom*(V,V)` of a complex, its subalgebras, and
//! operators with coefficients in an Artin ring.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::artin::ArtinAlgebra;
use crate::error::{Error, Result};
use crate::graded::{Complex, GradedSpace};
use crate::lie::{Ext, GradedLie};
use crate::linalg::{solve_linear, LinearSolution, Matrix, PivotOrder, SparseMatrix, Vector};
use crate::scalar::{factorial, q, sign_pow, Q};

/// `Hom*(V,V)` with the graded commutator and differential `[d_V, -]`.
///
/// The basis is the elementary operators `E(a<-b)` sending `e_b` to `e_a`,
/// indexed by `a * n + b`.
#[derive(Clone, Debug, PartialEq)]
pub struct EndDgla {
    space: GradedSpace,
    dv: SparseMatrix,
}

impl EndDgla {
    pub fn new(space: GradedSpace, dv: SparseMatrix) -> Result<Self> {
        let c = Complex::new(space, dv)?;
        Ok(Self::from_complex(&c))
    }

    pub fn from_complex(c: &Complex) -> Self {
        EndDgla { space: c.space().clone(), dv: c.differential().clone() }
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn dv(&self) -> &SparseMatrix {
        &self.dv
    }

    pub fn size(&self) -> usize {
        self.space.dim()
    }

    pub fn elementary(&self, a: usize, b: usize) -> SparseMatrix {
        let n = self.size();
        SparseMatrix::from_triplets(n, n, [(a, b, Q::one())])
    }

    pub fn entry_degree(&self, a: usize, b: usize) -> i32 {
        self.space.degree(a) - self.space.degree(b)
    }

    /// Bidegree shift of `E(a<-b)` when the space is bigraded.
    pub fn entry_bidegree(&self, a: usize, b: usize) -> Option<(i32, i32)> {
        let (pa, qa) = self.space.bidegree(a)?;
        let (pb, qb) = self.space.bidegree(b)?;
        Some((pa - pb, qa - qb))
    }

    /// Splits an operator into homogeneous pieces keyed by degree.
    pub fn degree_parts(&self, f: &SparseMatrix) -> BTreeMap<i32, SparseMatrix> {
        let n = self.size();
        let mut out: BTreeMap<i32, SparseMatrix> = BTreeMap::new();
        for (a, b, v) in f.entries() {
            out.entry(self.entry_degree(a, b)).or_insert_with(|| SparseMatrix::zeros(n, n)).add_entry(a, b, v.clone());
        }
        out
    }

    fn commutator_homogeneous(&self, f: &SparseMatrix, df: i32, g: &SparseMatrix, dg: i32) -> SparseMatrix {
        let fg = f.compose(g);
        let gf = g.compose(f);
        fg.sub(&gf.scale(&q(sign_pow((df * dg) as i64))))
    }

    /// Basis of the operators `f` with `f(S) ⊆ T` for every `(S, T)` in
    /// `constraints`, each spanning set given by vectors of `V`.
    pub fn constrained_subspace(&self, constraints: &[(Vec<Vector>, Vec<Vector>)]) -> Vec<SparseMatrix> {
        let n = self.size();
        let anns: Vec<Vec<Vector>> = constraints
            .iter()
            .map(|(_, t)| {
                if t.is_empty() {
                    return (0..n).map(|i| crate::linalg::unit_vector(n, i)).collect();
                }
                Matrix::from_rows(t.clone(), n).nullspace(PivotOrder::Natural)
            })
            .collect();
        let mut degrees: Vec<i32> = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let k = self.entry_degree(a, b);
                if !degrees.contains(&k) {
                    degrees.push(k);
                }
            }
        }
        degrees.sort();
        let mut out = Vec::new();
        for k in degrees {
            let unknowns: Vec<(usize, usize)> =
                (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| self.entry_degree(a, b) == k).collect();
            let mut rows = Vec::new();
            for ((s, _), ann) in constraints.iter().zip(&anns) {
                for sv in s {
                    for w in ann {
                        let row: Vector = unknowns.iter().map(|&(a, b)| &w[a] * &sv[b]).collect();
                        if row.iter().any(|x| !x.is_zero()) {
                            rows.push(row);
                        }
                    }
                }
            }
            let kernel = if rows.is_empty() {
                (0..unknowns.len()).map(|i| crate::linalg::unit_vector(unknowns.len(), i)).collect()
            } else {
                Matrix::from_rows(rows, unknowns.len()).nullspace(PivotOrder::Natural)
            };
            for v in kernel {
                out.push(SparseMatrix::from_triplets(
                    n,
                    n,
                    unknowns.iter().zip(v).map(|(&(a, b), c)| (a, b, c)),
                ));
            }
        }
        out
    }
}

impl GradedLie for EndDgla {
    type Elem = SparseMatrix;

    fn zero(&self) -> SparseMatrix {
        SparseMatrix::zeros(self.size(), self.size())
    }

    fn is_zero(&self, x: &SparseMatrix) -> bool {
        x.is_zero()
    }

    fn add(&self, x: &SparseMatrix, y: &SparseMatrix) -> SparseMatrix {
        x.add(y)
    }

    fn scale(&self, x: &SparseMatrix, c: &Q) -> SparseMatrix {
        x.scale(c)
    }

    fn bracket(&self, x: &SparseMatrix, y: &SparseMatrix) -> SparseMatrix {
        let xs = self.degree_parts(x);
        let ys = self.degree_parts(y);
        let mut out = self.zero();
        for (dx, f) in &xs {
            for (dy, g) in &ys {
                out = out.add(&self.commutator_homogeneous(f, *dx, g, *dy));
            }
        }
        out
    }

    fn differential(&self, x: &SparseMatrix) -> SparseMatrix {
        let mut out = self.zero();
        for (dx, f) in self.degree_parts(x) {
            out = out.add(&self.commutator_homogeneous(&self.dv, 1, &f, dx));
        }
        out
    }

    fn homogeneous_parts(&self, x: &SparseMatrix) -> Vec<(i32, SparseMatrix)> {
        self.degree_parts(x).into_iter().collect()
    }

    fn dim(&self) -> usize {
        self.size() * self.size()
    }

    fn basis(&self, i: usize) -> SparseMatrix {
        let n = self.size();
        self.elementary(i / n, i % n)
    }

    fn basis_degree(&self, i: usize) -> i32 {
        let n = self.size();
        self.entry_degree(i / n, i % n)
    }

    fn basis_name(&self, i: usize) -> String {
        let n = self.size();
        format!("E({}<-{})", self.space.name(i / n), self.space.name(i % n))
    }

    fn coordinates(&self, x: &SparseMatrix) -> Vec<(usize, Q)> {
        let n = self.size();
        x.entries().map(|(a, b, v)| (a * n + b, v.clone())).collect()
    }
}

/// A graded sub-DGLA of an endomorphism DGLA, given by a homogeneous basis.
#[derive(Clone, Debug)]
pub struct SubEnd {
    ambient: Arc<EndDgla>,
    basis: Vec<SparseMatrix>,
    names: Vec<String>,
    degrees: Vec<i32>,
    pivots: Vec<usize>,
    inverse: Matrix,
}

impl SubEnd {
    /// Requires a linearly independent homogeneous basis; closure under `d`
    /// and the bracket is checked by [`SubEnd::check_closed`].
    pub fn new(ambient: Arc<EndDgla>, basis: Vec<SparseMatrix>, prefix: &str) -> Result<Self> {
        let n = ambient.size();
        let mut degrees = Vec::with_capacity(basis.len());
        for b in &basis {
            let parts = ambient.degree_parts(b);
            if parts.len() != 1 {
                return Err(Error::Degree("subalgebra basis must be homogeneous and nonzero".into()));
            }
            degrees.push(*parts.keys().next().expect("one part"));
        }
        let k = basis.len();
        // Rows of B^T; pivot columns give a k×k invertible minor.
        let mut rows = Vec::with_capacity(k);
        for b in &basis {
            let mut v = vec![Q::zero(); n * n];
            for (a, c, x) in b.entries() {
                v[a * n + c] = x.clone();
            }
            rows.push(v);
        }
        let rref = Matrix::from_rows(rows.clone(), n * n).rref(PivotOrder::Natural);
        if rref.pivots.len() != k {
            return Err(Error::Invalid("subalgebra basis is linearly dependent".into()));
        }
        let pivots = rref.pivots.clone();
        let minor = Matrix::from_columns(
            &rows.iter().map(|r| pivots.iter().map(|&p| r[p].clone()).collect::<Vector>()).collect::<Vec<_>>(),
            k,
        );
        let mut inv_cols = Vec::with_capacity(k);
        for i in 0..k {
            match solve_linear(&minor, &crate::linalg::unit_vector(k, i), PivotOrder::Natural) {
                LinearSolution::Solved { particular, .. } => inv_cols.push(particular),
                LinearSolution::Unsolvable => return Err(Error::Invalid("singular pivot minor".into())),
            }
        }
        let inverse = Matrix::from_columns(&inv_cols, k);
        let names = basis
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let e: Vec<_> = b.entries().collect();
                if e.len() == 1 && e[0].2.is_one() {
                    ambient.basis_name(e[0].0 * n + e[0].1)
                } else {
                    format!("{prefix}{}", i + 1)
                }
            })
            .collect();
        Ok(SubEnd { ambient, basis, names, degrees, pivots, inverse })
    }

    pub fn ambient(&self) -> &Arc<EndDgla> {
        &self.ambient
    }

    pub fn basis_elements(&self) -> &[SparseMatrix] {
        &self.basis
    }

    /// Basis indices in degree `k`.
    pub fn indices_in_degree(&self, k: i32) -> Vec<usize> {
        (0..self.basis.len()).filter(|&i| self.degrees[i] == k).collect()
    }

    fn raw_coords(&self, x: &SparseMatrix) -> Vector {
        let n = self.ambient.size();
        let sample: Vector = self.pivots.iter().map(|&p| x.get(p / n, p % n)).collect();
        self.inverse.mul_vec(&sample)
    }

    pub fn contains(&self, x: &SparseMatrix) -> bool {
        let c = self.raw_coords(x);
        let mut back = self.ambient.zero();
        for (b, ci) in self.basis.iter().zip(&c) {
            back = back.add(&b.scale(ci));
        }
        back == *x
    }

    /// Closure under the differential and the bracket, on basis elements.
    pub fn check_closed(&self) -> crate::report::Report {
        let mut r = crate::report::Report::new();
        for (i, b) in self.basis.iter().enumerate() {
            if !self.contains(&self.ambient.differential(b)) {
                r.fail("closed-under-d", self.names[i].clone());
            }
            for (j, c) in self.basis.iter().enumerate().skip(i) {
                if !self.contains(&self.ambient.bracket(b, c)) {
                    r.fail("closed-under-bracket", format!("({},{})", self.names[i], self.names[j]));
                }
            }
        }
        r
    }
}

impl GradedLie for SubEnd {
    type Elem = SparseMatrix;

    fn zero(&self) -> SparseMatrix {
        self.ambient.zero()
    }
    fn is_zero(&self, x: &SparseMatrix) -> bool {
        x.is_zero()
    }
    fn add(&self, x: &SparseMatrix, y: &SparseMatrix) -> SparseMatrix {
        x.add(y)
    }
    fn scale(&self, x: &SparseMatrix, c: &Q) -> SparseMatrix {
        x.scale(c)
    }
    fn bracket(&self, x: &SparseMatrix, y: &SparseMatrix) -> SparseMatrix {
        self.ambient.bracket(x, y)
    }
    fn differential(&self, x: &SparseMatrix) -> SparseMatrix {
        self.ambient.differential(x)
    }
    fn homogeneous_parts(&self, x: &SparseMatrix) -> Vec<(i32, SparseMatrix)> {
        self.ambient.homogeneous_parts(x)
    }
    fn dim(&self) -> usize {
        self.basis.len()
    }
    fn basis(&self, i: usize) -> SparseMatrix {
        self.basis[i].clone()
    }
    fn basis_degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }
    fn basis_name(&self, i: usize) -> String {
        self.names[i].clone()
    }
    fn coordinates(&self, x: &SparseMatrix) -> Vec<(usize, Q)> {
        self.raw_coords(x).into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()
    }
}

/// Operator with coefficients in an Artin ring.
pub type AOperator = Ext<SparseMatrix>;
/// Vector of `V ⊗ A`.
pub type AVector = Ext<Vector>;

pub fn op_identity(ring: &Arc<ArtinAlgebra>, n: usize) -> AOperator {
    let mut comps = vec![SparseMatrix::zeros(n, n); ring.dim()];
    comps[0] = SparseMatrix::identity(n);
    Ext::from_components(ring, comps).expect("sized")
}

/// Lifts a `Q`-operator with constant coefficients.
pub fn op_constant(ring: &Arc<ArtinAlgebra>, f: &SparseMatrix) -> AOperator {
    let n = f.rows();
    let mut comps = vec![SparseMatrix::zeros(n, f.cols()); ring.dim()];
    comps[0] = f.clone();
    Ext::from_components(ring, comps).expect("sized")
}

pub fn op_add(f: &AOperator, g: &AOperator) -> AOperator {
    let comps = f.components().iter().zip(g.components()).map(|(a, b)| a.add(b)).collect();
    Ext::from_components(f.ring(), comps).expect("sized")
}

pub fn op_sub(f: &AOperator, g: &AOperator) -> AOperator {
    let comps = f.components().iter().zip(g.components()).map(|(a, b)| a.sub(b)).collect();
    Ext::from_components(f.ring(), comps).expect("sized")
}

pub fn op_scale(f: &AOperator, c: &Q) -> AOperator {
    f.map(|a| a.scale(c))
}

pub fn op_is_zero(f: &AOperator) -> bool {
    f.components().iter().all(|c| c.is_zero())
}

/// Composition `f ∘ g` over the ring.
pub fn op_compose(f: &AOperator, g: &AOperator) -> AOperator {
    let ring = f.ring();
    let (r, c) = (f.components()[0].rows(), g.components()[0].cols());
    let mut comps = vec![SparseMatrix::zeros(r, c); ring.dim()];
    for (i, fi) in f.components().iter().enumerate() {
        if fi.is_zero() {
            continue;
        }
        for (j, gj) in g.components().iter().enumerate() {
            if gj.is_zero() {
                continue;
            }
            if let Some(k) = ring.mul_index(i, j) {
                comps[k] = comps[k].add(&fi.compose(gj));
            }
        }
    }
    Ext::from_components(ring, comps).expect("sized")
}

pub fn op_apply(f: &AOperator, v: &AVector) -> AVector {
    let ring = f.ring();
    let n = f.components()[0].rows();
    let mut comps = vec![vec![Q::zero(); n]; ring.dim()];
    for (i, fi) in f.components().iter().enumerate() {
        if fi.is_zero() {
            continue;
        }
        for (j, vj) in v.components().iter().enumerate() {
            if let Some(k) = ring.mul_index(i, j) {
                for (x, y) in comps[k].iter_mut().zip(fi.apply(vj)) {
                    *x += y;
                }
            }
        }
    }
    Ext::from_components(ring, comps).expect("sized")
}

fn require_nilpotent(a: &AOperator) -> Result<()> {
    if a.components()[0].is_zero() {
        Ok(())
    } else {
        Err(Error::Precondition("operator exponent must have coefficients in the maximal ideal".into()))
    }
}

/// `e^a = sum a^k / k!`, a finite sum since `a` has coefficients in `m_A`.
pub fn op_exp(a: &AOperator) -> Result<AOperator> {
    require_nilpotent(a)?;
    let n = a.components()[0].rows();
    let mut acc = op_identity(a.ring(), n);
    let mut term = acc.clone();
    for k in 1..=a.ring().nilpotency_index() {
        term = op_compose(&term, a);
        if op_is_zero(&term) {
            break;
        }
        acc = op_add(&acc, &op_scale(&term, &(Q::one() / factorial(k))));
    }
    Ok(acc)
}

/// `log(g) = sum (-1)^{k+1} (g - 1)^k / k` for `g ≡ 1` modulo `m_A`.
pub fn op_log(g: &AOperator) -> Result<AOperator> {
    let n = g.components()[0].rows();
    let x = op_sub(g, &op_identity(g.ring(), n));
    require_nilpotent(&x)?;
    let mut acc = x.clone();
    let mut term = x.clone();
    for k in 2..=g.ring().nilpotency_index() {
        term = op_compose(&term, &x);
        if op_is_zero(&term) {
            break;
        }
        let c = Q::from_integer(sign_pow(k as i64 + 1).into()) / Q::from_integer((k as i64).into());
        acc = op_add(&acc, &op_scale(&term, &c));
    }
    Ok(acc)
}

/// Gauge action by conjugation: `e^a (d + x) e^{-a} - d`.
pub fn gauge_by_conjugation(end: &EndDgla, a: &AOperator, x: &AOperator) -> Result<AOperator> {
    let d = op_constant(a.ring(), end.dv());
    let ea = op_exp(a)?;
    let ema = op_exp(&op_scale(a, &q(-1)))?;
    Ok(op_sub(&op_compose(&op_compose(&ea, &op_add(&d, x)), &ema), &d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgla::check_lie;
    use crate::lie::extend_scalars;

    fn two_term() -> EndDgla {
        let space = GradedSpace::from_degrees([("a", 0), ("b", 1), ("c", 1)]).unwrap();
        let dv = SparseMatrix::from_triplets(3, 3, [(1, 0, q(1))]);
        EndDgla::new(space, dv).unwrap()
    }

    #[test]
    fn end_dgla_satisfies_axioms() {
        let e = two_term();
        assert!(check_lie(&e).unwrap().passed());
    }

    #[test]
    fn nilpotent_exponential() {
        let ring = ArtinAlgebra::dual_numbers();
        let n = SparseMatrix::from_triplets(2, 2, [(0, 1, q(1))]);
        let mut comps = vec![SparseMatrix::zeros(2, 2); 2];
        comps[1] = n.clone();
        let a = Ext::from_components(&ring, comps.clone()).unwrap();
        let e = op_exp(&a).unwrap();
        assert_eq!(e.components()[0], SparseMatrix::identity(2));
        assert_eq!(e.components()[1], n);
        assert!(!op_exp(&op_identity(&ring, 2)).unwrap_err().to_string().is_empty());
        assert_eq!(op_log(&e).unwrap(), a);
    }

    #[test]
    fn series_gauge_matches_conjugation() {
        let e = two_term();
        let ring = ArtinAlgebra::truncated("t", 3);
        let ext = extend_scalars(&e, &ring);
        let t = ring.var("t").unwrap();
        let t2 = t.pow(2);
        // degree-0 operators: E(a<-a), E(b<-c), E(c<-b), E(b<-b)
        let a = ext.add(
            &ext.lift(&e.elementary(1, 2), &t),
            &ext.lift(&e.add(&e.elementary(0, 0), &e.elementary(2, 1)), &t2.scale(&q(3))),
        );
        let x = ext.lift(&e.elementary(2, 0), &t);
        let by_series = ext.gauge_act(&a, &x).unwrap();
        let by_conj = gauge_by_conjugation(&e, &a, &x).unwrap();
        assert_eq!(by_series, by_conj);
    }

    #[test]
    fn constrained_subspace_of_identity_constraint() {
        let e = two_term();
        // f(span{a,b}) ⊆ span{a,b}, a subcomplex
        let s = vec![vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)]];
        let sub = e.constrained_subspace(&[(s.clone(), s)]);
        assert_eq!(sub.len(), 9 - 2);
        let m = SubEnd::new(Arc::new(e), sub, "m").unwrap();
        assert!(m.check_closed().passed());
        for i in 0..m.dim() {
            let b = m.basis(i);
            let coords = m.coordinates(&b);
            assert_eq!(coords, vec![(i, q(1))]);
        }
    }
}
