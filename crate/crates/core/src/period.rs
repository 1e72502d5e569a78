//! The subalgebras `L ⊆ M ⊆ End(A)`, the automorphism `ψ̃` of `H*(A)`
//! attached to `MC_χ` elements, the period map on polyvector fields, Hodge
//! filtrations and the obstruction subspace.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::artin::{ArtinAlgebra, ArtinElement};
use crate::cone::{Cone, McChi};
use crate::endo::{op_apply, op_compose, op_constant, op_exp, op_is_zero, op_scale, op_sub, AOperator, AVector, EndDgla, SubEnd};
use crate::error::{Error, Result};
use crate::graded::Complex;
use crate::lie::{extend_scalars, Ext, GradedLie};
use crate::linalg::{
    in_span, is_zero_vector, solve_linear, span_basis, span_dim, unit_vector, zero_vector, LinearSolution, Matrix,
    PivotOrder, SparseMatrix, Vector,
};
use crate::models::{check_deldelbar_lemma, BigradedModel, ModelFile, PolyModel, KS_BIDEGREE};
use crate::report::Report;
use crate::scalar::Q;

/// `MC_χ` element `(α, e^a)` for the inclusion `χ: L → End(A)`, with
/// `α ∈ L^1 ⊗ m_A` and `a ∈ End^0 ⊗ m_A`.
pub type McChiOp = McChi<SparseMatrix, SparseMatrix>;

/// Which of the two operator subalgebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubalgebraKind {
    /// `f(ker ∂) ⊆ ∂A`.
    L,
    /// `f(ker ∂) ⊆ ker ∂` and `f(∂A) ⊆ ∂A`.
    M,
}

/// Basis of `H*(A)` by `∂`- and `∂̄`-closed representatives, bihomogeneous,
/// sorted by total degree, then `p`, then representative name.
#[derive(Clone, Debug)]
pub struct ClassBasis {
    reps: Vec<Vector>,
    bidegrees: Vec<(i32, i32)>,
    names: Vec<String>,
    solver: Matrix,
    dim_forms: usize,
}

impl ClassBasis {
    fn new(m: &BigradedModel) -> Result<Self> {
        let n = m.dim();
        let mut entries: Vec<((i32, i32, String), Vector, (i32, i32))> = Vec::new();
        for (p, qq) in m.bidegrees() {
            let exact = m.ddbar_exact_in_bidegree(p, qq);
            let mut chosen = exact.clone();
            for v in m.closed_in_bidegree(p, qq) {
                if !in_span(&chosen, &v, n) {
                    chosen.push(v.clone());
                    entries.push(((p + qq, p, m.format(&v)), v, (p, qq)));
                }
            }
        }
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let betti = m.complex().cohomology().total_dim();
        if betti != entries.len() {
            return Err(Error::Precondition(format!(
                "{} Bott-Chern classes but total Betti number {betti}; the ∂∂̄-lemma fails",
                entries.len()
            )));
        }
        let reps: Vec<Vector> = entries.iter().map(|e| e.1.clone()).collect();
        let mut cols = reps.clone();
        let d = m.d();
        for j in 0..n {
            cols.push(d.apply(&unit_vector(n, j)));
        }
        Ok(ClassBasis {
            bidegrees: entries.iter().map(|e| e.2).collect(),
            names: entries.iter().map(|e| format!("[{}]", e.0 .2)).collect(),
            reps,
            solver: Matrix::from_columns(&cols, n),
            dim_forms: n,
        })
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn representative(&self, i: usize) -> &Vector {
        &self.reps[i]
    }

    pub fn bidegree(&self, i: usize) -> (i32, i32) {
        self.bidegrees[i]
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    /// Coordinates of the class of a `d`-closed form.
    pub fn class_of(&self, v: &[Q]) -> Result<Vector> {
        match solve_linear(&self.solver, v, PivotOrder::Natural) {
            LinearSolution::Solved { particular, .. } => Ok(particular[..self.reps.len()].to_vec()),
            LinearSolution::Unsolvable => Err(Error::Invalid("form is not d-closed".into())),
        }
    }

    fn class_of_ext(&self, v: &AVector) -> Result<AVector> {
        let comps = v.components().iter().map(|c| self.class_of(c)).collect::<Result<Vec<_>>>()?;
        Ext::from_components(v.ring(), comps)
    }

    pub fn dim_forms(&self) -> usize {
        self.dim_forms
    }
}

/// Square matrix over an Artin ring in the class basis; column `j` is the
/// image of class `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodMatrix {
    ring: Arc<ArtinAlgebra>,
    labels: Vec<String>,
    columns: Vec<AVector>,
}

impl PeriodMatrix {
    pub fn identity(ring: &Arc<ArtinAlgebra>, labels: Vec<String>) -> Self {
        let h = labels.len();
        let columns = (0..h)
            .map(|j| {
                let mut comps = vec![zero_vector(h); ring.dim()];
                comps[0][j] = Q::from_integer(1.into());
                Ext::from_components(ring, comps).expect("sized")
            })
            .collect();
        PeriodMatrix { ring: ring.clone(), labels, columns }
    }

    pub fn ring(&self) -> &Arc<ArtinAlgebra> {
        &self.ring
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn column(&self, j: usize) -> &AVector {
        &self.columns[j]
    }

    pub fn entry(&self, i: usize, j: usize) -> ArtinElement {
        let coeffs = self.columns[j].components().iter().map(|c| c[i].clone()).collect();
        ArtinElement::from_coeffs(&self.ring, coeffs).expect("sized")
    }

    /// Rational matrix of the coefficient of the ring monomial `mono`.
    pub fn component(&self, mono: usize) -> Matrix {
        let cols: Vec<Vector> = self.columns.iter().map(|c| c.component(mono).clone()).collect();
        Matrix::from_columns(&cols, self.size())
    }

    /// Reduces to the identity modulo `m_A`.
    pub fn is_identity_mod_m(&self) -> bool {
        self.component(0) == Matrix::identity(self.size())
    }

    /// Reduction of every entry along a quotient of rings.
    pub fn reduce(&self, target: &Arc<ArtinAlgebra>) -> Result<PeriodMatrix> {
        let map = self.ring.quotient_map(target)?;
        let h = self.size();
        let columns = self
            .columns
            .iter()
            .map(|c| {
                let mut comps = vec![zero_vector(h); target.dim()];
                for (i, v) in c.components().iter().enumerate() {
                    if let Some(k) = map[i] {
                        comps[k] = v.clone();
                    }
                }
                Ext::from_components(target, comps).expect("sized")
            })
            .collect();
        Ok(PeriodMatrix { ring: target.clone(), labels: self.labels.clone(), columns })
    }

    /// One line per entry: `row col value`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.size() {
            for j in 0..self.size() {
                out.push_str(&format!("{} {} {}\n", self.labels[i], self.labels[j], self.entry(i, j)));
            }
        }
        out
    }
}

impl fmt::Display for PeriodMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// `H*(F^m)` as a set of class-basis indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationSubspace {
    pub m: i32,
    pub indices: Vec<usize>,
}

/// An `A`-submodule of `H*(A) ⊗ A`, stored by the reduced row echelon form
/// of its underlying `Q`-space, which is canonical.
#[derive(Clone, Debug, PartialEq)]
pub struct ASubmodule {
    ring: Arc<ArtinAlgebra>,
    rank: usize,
    canonical: Vec<Vector>,
}

impl ASubmodule {
    /// Submodule generated by `gens`.
    pub fn generated_by(ring: &Arc<ArtinAlgebra>, rank: usize, gens: &[AVector]) -> Self {
        let mut span = Vec::new();
        for g in gens {
            for mono in 0..ring.dim() {
                let mut flat = zero_vector(rank * ring.dim());
                for (j, comp) in g.components().iter().enumerate() {
                    if let Some(k) = ring.mul_index(mono, j) {
                        for (i, c) in comp.iter().enumerate() {
                            flat[k * rank + i] += c;
                        }
                    }
                }
                if !is_zero_vector(&flat) {
                    span.push(flat);
                }
            }
        }
        ASubmodule::from_q_span(ring, rank, span)
    }

    fn from_q_span(ring: &Arc<ArtinAlgebra>, rank: usize, span: Vec<Vector>) -> Self {
        let width = rank * ring.dim();
        let canonical = if span.is_empty() {
            Vec::new()
        } else {
            let rref = Matrix::from_rows(span, width).rref(PivotOrder::Natural);
            (0..rref.pivots.len()).map(|i| rref.matrix.row(i).to_vec()).collect()
        };
        ASubmodule { ring: ring.clone(), rank, canonical }
    }

    /// Dimension over `Q`.
    pub fn q_dim(&self) -> usize {
        self.canonical.len()
    }

    pub fn canonical_basis(&self) -> &[Vector] {
        &self.canonical
    }

    pub fn contains(&self, v: &AVector) -> bool {
        let flat: Vector = v.components().iter().flat_map(|c| c.iter().cloned()).collect();
        in_span(&self.canonical, &flat, self.rank * self.ring.dim())
    }

    /// Generators whose residues form a basis of the residue space; by
    /// Nakayama they generate whenever the module is free.
    pub fn residue_rank(&self) -> usize {
        let res: Vec<Vector> = self.canonical.iter().map(|v| v[..self.rank].to_vec()).collect();
        span_dim(&res, self.rank)
    }
}

/// Both sides of the filtration comparison.
#[derive(Clone, Debug)]
pub struct PeriodTheoremCheck {
    pub holds: bool,
    pub image: ASubmodule,
    pub deformed: ASubmodule,
}

/// Options for [`PeriodModel::psi_tilde_with`].
#[derive(Clone, Debug)]
pub struct PsiOptions {
    pub order: PivotOrder,
    /// Replaces representative `j` by `ω_j + ∂∂̄ z_j`.
    pub shifts: Vec<Option<Vector>>,
}

impl Default for PsiOptions {
    fn default() -> Self {
        PsiOptions { order: PivotOrder::Natural, shifts: Vec::new() }
    }
}

/// `L` and `M` with explicit bases.
pub struct ChiSubalgebras {
    pub l: SubEnd,
    pub m: SubEnd,
}

impl ChiSubalgebras {
    /// The inclusion `χ: L → End(A)` as a cone.
    pub fn cone(&self) -> Cone<SubEnd, EndDgla> {
        Cone::new(self.l.clone(), (**self.l.ambient()).clone(), |x: &SparseMatrix| x.clone())
    }

    pub fn check_closed(&self) -> Report {
        let mut r = self.l.check_closed();
        r.merge(self.m.check_closed());
        for k in 0..self.l.dim() {
            if !self.m.contains(&self.l.basis(k)) {
                r.fail("l-in-m", self.l.basis_name(k));
            }
        }
        r
    }
}

/// A form model satisfying the `∂∂̄`-lemma with its polyvector fields.
#[derive(Clone, Debug)]
pub struct PeriodModel {
    forms: Arc<BigradedModel>,
    poly: PolyModel,
    end: Arc<EndDgla>,
    classes: ClassBasis,
    ker_del: Vec<Vector>,
    im_del: Vec<Vector>,
    del_delbar: Matrix,
}

impl PeriodModel {
    pub fn new(mf: ModelFile) -> Result<Self> {
        let forms = mf.forms;
        let lemma = check_deldelbar_lemma(&forms);
        if !lemma.holds {
            return Err(Error::Precondition(format!("the ∂∂̄-lemma fails: {}", lemma.report.lines().join("; "))));
        }
        let classes = ClassBasis::new(&forms)?;
        let ker_del = span_basis(&forms.ker_del(), forms.dim());
        let im_del = forms.im_del();
        let d = forms.d();
        let del_delbar = d.compose(forms.del()).to_dense();
        Ok(PeriodModel { end: mf.poly.end().clone(), poly: mf.poly, classes, ker_del, im_del, del_delbar, forms })
    }

    pub fn torus(n: usize) -> Result<Self> {
        Self::new(ModelFile::torus(n)?)
    }

    pub fn forms(&self) -> &Arc<BigradedModel> {
        &self.forms
    }

    pub fn poly(&self) -> &PolyModel {
        &self.poly
    }

    pub fn end(&self) -> &Arc<EndDgla> {
        &self.end
    }

    pub fn classes(&self) -> &ClassBasis {
        &self.classes
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.classes.len()).map(|i| self.classes.name(i).to_string()).collect()
    }

    /// Membership in `L` or `M`, by span tests on `ker ∂` and `∂A`.
    pub fn contains(&self, kind: SubalgebraKind, f: &SparseMatrix) -> bool {
        let n = self.forms.dim();
        match kind {
            SubalgebraKind::L => self.ker_del.iter().all(|k| in_span(&self.im_del, &f.apply(k), n)),
            SubalgebraKind::M => {
                self.ker_del.iter().all(|k| in_span(&self.ker_del, &f.apply(k), n))
                    && self.im_del.iter().all(|b| in_span(&self.im_del, &f.apply(b), n))
            }
        }
    }

    fn contains_ext(&self, kind: SubalgebraKind, f: &AOperator) -> bool {
        f.components().iter().all(|c| self.contains(kind, c))
    }

    /// Explicit bases of `L` and `M`; only for small models, since the
    /// constraint systems have `dim(A)^2` unknowns.
    pub fn build_chi(&self) -> Result<ChiSubalgebras> {
        let l_basis = self.end.constrained_subspace(&[(self.ker_del.clone(), self.im_del.clone())]);
        let m_basis = self
            .end
            .constrained_subspace(&[(self.ker_del.clone(), self.ker_del.clone()), (self.im_del.clone(), self.im_del.clone())]);
        Ok(ChiSubalgebras { l: SubEnd::new(self.end.clone(), l_basis, "l")?, m: SubEnd::new(self.end.clone(), m_basis, "m")? })
    }

    /// Conditions for `(α, e^a)` to lie in `MC_χ`: membership, coefficients
    /// in `m_A`, and `e^{-a} d e^{a} = d + α`.
    pub fn check_mc_chi(&self, e: &McChiOp) -> Report {
        let mut r = Report::new();
        if !e.x.component(0).is_zero() || !e.a.component(0).is_zero() {
            r.fail("maximal-ideal", "constant term");
        }
        if !self.contains_ext(SubalgebraKind::L, &e.x) {
            r.fail("alpha-in-l", "");
        }
        for (k, x) in [(1, &e.x), (0, &e.a)] {
            for c in x.components() {
                if self.end.degree_parts(c).keys().any(|&d| d != k) {
                    r.fail("degree", format!("expected degree {k}"));
                }
            }
        }
        if r.passed() {
            match self.conjugated_differential(&e.a) {
                Ok(c) => {
                    let d = op_constant(e.a.ring(), &self.forms.d());
                    let resid = op_sub(&op_sub(&c, &d), &e.x);
                    if !op_is_zero(&resid) {
                        r.fail("flatness", "e^{-a} d e^{a} - d - alpha != 0");
                    }
                }
                Err(err) => r.fail("flatness", err.to_string()),
            }
        }
        r
    }

    fn conjugated_differential(&self, a: &AOperator) -> Result<AOperator> {
        let d = op_constant(a.ring(), &self.forms.d());
        let ea = op_exp(a)?;
        let ema = op_exp(&op_scale(a, &Q::from_integer((-1).into())))?;
        Ok(op_compose(&op_compose(&ema, &d), &ea))
    }

    /// `ψ̃(α, e^a)` with default choices.
    pub fn psi_tilde(&self, e: &McChiOp) -> Result<PeriodMatrix> {
        self.psi_tilde_with(e, &PsiOptions::default())
    }

    /// For each class `[ω]`: the representative `ω_0`, a `β` solving
    /// `d∂β = α(ω_0 - ∂β)` order by order in `m_A`, and the class of
    /// `e^a(ω_0 - ∂β)`.
    pub fn psi_tilde_with(&self, e: &McChiOp, opts: &PsiOptions) -> Result<PeriodMatrix> {
        let r = self.check_mc_chi(e);
        if !r.passed() {
            return Err(Error::Precondition(format!("not an MC_chi element: {}", r.lines().join("; "))));
        }
        let ring = e.a.ring().clone();
        let n = self.forms.dim();
        let del = self.forms.del();
        let d = self.forms.d();
        let ea = op_exp(&e.a)?;
        let mut monos: Vec<usize> = (1..ring.dim()).collect();
        monos.sort_by_key(|&i| (ring.degree_of(i), i));
        let mut columns = Vec::with_capacity(self.classes.len());
        for j in 0..self.classes.len() {
            let mut w0 = self.classes.representative(j).clone();
            if let Some(Some(z)) = opts.shifts.get(j) {
                let shift = d.compose(del).apply(z);
                for (a, b) in w0.iter_mut().zip(shift) {
                    *a -= b;
                }
            }
            let mut x: Vec<Vector> = vec![zero_vector(n); ring.dim()];
            x[0] = w0;
            for &nu in &monos {
                let mut rhs = zero_vector(n);
                for (rho, alpha) in e.x.components().iter().enumerate().skip(1) {
                    if alpha.is_zero() {
                        continue;
                    }
                    for (mu, xm) in x.iter().enumerate() {
                        if ring.mul_index(rho, mu) == Some(nu) {
                            for (a, b) in rhs.iter_mut().zip(alpha.apply(xm)) {
                                *a += b;
                            }
                        }
                    }
                }
                let beta = match solve_linear(&self.del_delbar, &rhs, opts.order) {
                    LinearSolution::Solved { particular, .. } => particular,
                    LinearSolution::Unsolvable => {
                        return Err(Error::Obstruction {
                            order: ring.degree_of(nu),
                            detail: format!("no β for {} at monomial {nu}", self.classes.name(j)),
                        })
                    }
                };
                x[nu] = del.apply(&beta).into_iter().map(|c| -c).collect();
            }
            let v = op_apply(&ea, &Ext::from_components(&ring, x)?);
            if v.components().iter().any(|c| !is_zero_vector(&d.apply(c))) {
                return Err(Error::Invalid(format!("e^a(ω - ∂β) is not closed for {}", self.classes.name(j))));
            }
            columns.push(self.classes.class_of_ext(&v)?);
        }
        Ok(PeriodMatrix { ring, labels: self.labels(), columns })
    }

    /// `(l_ξ, i_ξ)` with `l_ξ = [d, i_ξ] + i_{Dξ}`.
    pub fn phi_element(&self, xi: &Ext<Vector>) -> Result<McChiOp> {
        let poly = self.poly.poly();
        let ext = extend_scalars(poly, xi.ring());
        let (ok, resid) = ext.mc_check(xi)?;
        if !ok {
            return Err(Error::Precondition(format!(
                "ξ is not Maurer-Cartan in Poly: residual {:?}",
                resid.components().iter().map(|c| poly.format(c)).collect::<Vec<_>>()
            )));
        }
        let d = self.forms.d();
        let i = self.poly.contraction_ext(xi);
        let l = xi.map(|v| self.end.bracket(&d, &self.poly.contraction(v)).add(&self.poly.contraction(&poly.differential(v))));
        Ok(McChi { x: l, a: i })
    }

    /// `Φ(ξ) = ψ̃(l_ξ, e^{i_ξ})`.
    pub fn phi(&self, xi: &Ext<Vector>) -> Result<PeriodMatrix> {
        self.psi_tilde(&self.phi_element(xi)?)
    }

    /// Map on `H*(A)` induced by contracting with a `D`-closed `ξ`:
    /// `[ω] ↦ [i_ξ ω - ∂̄γ]` where `∂∂̄γ = ∂ i_ξ ω`.
    pub fn cohomology_contraction(&self, xi: &[Q]) -> Result<Matrix> {
        let n = self.forms.dim();
        let i = self.poly.contraction(xi);
        let del = self.forms.del();
        let delbar = self.forms.delbar();
        let ddbar = del.compose(delbar).to_dense();
        let mut cols = Vec::new();
        for j in 0..self.classes.len() {
            let y = i.apply(self.classes.representative(j));
            if !is_zero_vector(&delbar.apply(&y)) {
                return Err(Error::Precondition("contraction does not commute with ∂̄; is ξ D-closed?".into()));
            }
            let dy = del.apply(&y);
            let gamma = match solve_linear(&ddbar, &dy, PivotOrder::Natural) {
                LinearSolution::Solved { particular, .. } => particular,
                LinearSolution::Unsolvable => return Err(Error::Precondition("∂ i_ξ ω is not ∂∂̄-exact".into())),
            };
            let corr = delbar.apply(&gamma);
            let z: Vector = y.iter().zip(corr).map(|(a, b)| a - b).collect();
            debug_assert_eq!(z.len(), n);
            cols.push(self.classes.class_of(&z)?);
        }
        Ok(Matrix::from_columns(&cols, self.classes.len()))
    }

    /// Representatives of a basis of `H^k(Poly, D)`.
    pub fn poly_cohomology(&self, k: i32) -> Result<Vec<Vector>> {
        let poly = self.poly.poly();
        let c = Complex::new(poly.space().clone(), poly.data().d.clone())?;
        Ok(c.cohomology().representatives(k).to_vec())
    }

    /// For each basis class `ξ̄` of `H^1(Poly)`, the `t`-coefficient of
    /// `Φ(tξ̄)` over `Q[t]/(t^2)`.
    pub fn first_order_differential(&self) -> Result<Vec<(Vector, Matrix)>> {
        let ring = ArtinAlgebra::dual_numbers();
        let t = ring.index_of(&[1]).expect("t");
        let ext = extend_scalars(self.poly.poly(), &ring);
        self.poly_cohomology(1)?
            .into_iter()
            .map(|xi| {
                let p = self.phi(&ext.lift_monomial(&xi, t))?;
                Ok((xi, p.component(t)))
            })
            .collect()
    }

    /// Joint kernel in `H^2(Poly)` of the contraction maps on cohomology,
    /// as representatives.
    pub fn obstruction_subspace(&self) -> Result<Vec<Vector>> {
        let reps = self.poly_cohomology(2)?;
        if reps.is_empty() {
            return Ok(Vec::new());
        }
        let h = self.classes.len();
        let mut rows = vec![zero_vector(reps.len()); h * h];
        for (k, xi) in reps.iter().enumerate() {
            let m = self.cohomology_contraction(xi)?;
            for i in 0..h {
                for j in 0..h {
                    rows[i * h + j][k] = m.get(i, j).clone();
                }
            }
        }
        let kernel = if h == 0 {
            (0..reps.len()).map(|k| unit_vector(reps.len(), k)).collect()
        } else {
            Matrix::from_rows(rows, reps.len()).nullspace(PivotOrder::Natural)
        };
        Ok(kernel
            .into_iter()
            .map(|c| {
                let mut v = zero_vector(self.poly.dim());
                for (ck, xi) in c.iter().zip(&reps) {
                    for (a, b) in v.iter_mut().zip(xi) {
                        *a += ck * b;
                    }
                }
                v
            })
            .collect())
    }

    /// Classes of bidegree `p ≥ m`; empty once `m` exceeds every `p`.
    pub fn hodge_filtration(&self, m: i32) -> Result<FiltrationSubspace> {
        if m < 0 {
            return Err(Error::Precondition(format!("filtration index must be non-negative, got {m}")));
        }
        let indices = (0..self.classes.len()).filter(|&i| self.classes.bidegree(i).0 >= m).collect();
        Ok(FiltrationSubspace { m, indices })
    }

    /// `P · F` as an `A`-submodule.
    pub fn grassmann_project(&self, p: &PeriodMatrix, f: &FiltrationSubspace) -> ASubmodule {
        let gens: Vec<AVector> = f.indices.iter().map(|&j| p.column(j).clone()).collect();
        ASubmodule::generated_by(p.ring(), p.size(), &gens)
    }

    /// `Φ_ξ(H*(F^m))` against the classes of `d`-closed elements of
    /// `e^{i_ξ}(F^m ⊗ A)`.
    pub fn period_theorem_check(&self, xi: &Ext<Vector>, m: i32) -> Result<PeriodTheoremCheck> {
        if !xi.components().iter().all(|c| self.poly.is_kodaira_spencer(c)) {
            return Err(Error::Precondition(format!("ξ must be concentrated in bidegree {KS_BIDEGREE:?}")));
        }
        let ring = xi.ring().clone();
        let f = self.hodge_filtration(m)?;
        let image = self.grassmann_project(&self.phi(xi)?, &f);

        let n = self.forms.dim();
        let d = self.forms.d();
        let e = op_exp(&self.poly.contraction_ext(xi))?;
        let fm: Vec<usize> = (0..n).filter(|&i| self.forms.bidegree(i).0 >= m).collect();
        let mut images = Vec::new();
        let mut rows_d: Vec<Vector> = Vec::new();
        for mono in 0..ring.dim() {
            for &i in &fm {
                let mut comps = vec![zero_vector(n); ring.dim()];
                comps[mono] = unit_vector(n, i);
                let u = op_apply(&e, &Ext::from_components(&ring, comps)?);
                rows_d.push(u.components().iter().flat_map(|c| d.apply(c)).collect());
                images.push(u);
            }
        }
        let closed_combos = if images.is_empty() {
            Vec::new()
        } else {
            let cols = Matrix::from_columns(&rows_d, n * ring.dim());
            cols.nullspace(PivotOrder::Natural)
        };
        let mut span = Vec::new();
        for c in closed_combos {
            let mut comps = vec![zero_vector(n); ring.dim()];
            for (ck, u) in c.iter().zip(&images) {
                if ck.is_zero() {
                    continue;
                }
                for (acc, uc) in comps.iter_mut().zip(u.components()) {
                    for (a, b) in acc.iter_mut().zip(uc) {
                        *a += ck * b;
                    }
                }
            }
            let cls = self.classes.class_of_ext(&Ext::from_components(&ring, comps)?)?;
            span.push(cls.components().iter().flat_map(|c| c.iter().cloned()).collect());
        }
        let deformed = ASubmodule::from_q_span(&ring, self.classes.len(), span);
        Ok(PeriodTheoremCheck { holds: image == deformed, image, deformed })
    }

    /// Acyclicity of `(e^a(∂A ⊗ A), d)`, computed on the underlying
    /// `Q`-space. Fails if the space is not a subcomplex.
    pub fn perturbed_exact_part_acyclic(&self, e: &McChiOp) -> Result<bool> {
        let ring = e.a.ring().clone();
        let n = self.forms.dim();
        let width = n * ring.dim();
        let d = self.forms.d();
        let ea = op_exp(&e.a)?;
        let mut gens = Vec::new();
        for b in &self.im_del {
            for mono in 0..ring.dim() {
                let mut comps = vec![zero_vector(n); ring.dim()];
                comps[mono] = b.clone();
                let u = op_apply(&ea, &Ext::from_components(&ring, comps)?);
                gens.push(u.components().iter().flat_map(|c| c.iter().cloned()).collect::<Vector>());
            }
        }
        let v = span_basis(&gens, width);
        let dv: Vec<Vector> = v
            .iter()
            .map(|u| u.chunks(n).flat_map(|c| d.apply(c)).collect())
            .collect();
        if dv.iter().any(|w| !in_span(&v, w, width)) {
            return Err(Error::Invalid("e^a(∂A) is not d-stable".into()));
        }
        let rank = span_dim(&dv, width);
        Ok(v.len() == 2 * rank)
    }
}
