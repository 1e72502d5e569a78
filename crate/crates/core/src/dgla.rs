//! DGLAs given by structure constants, their validation, and morphisms.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graded::{BasisElement, GradedSpace};
use crate::io::{format_combination, parse_combination, parse_pair, strip_comment};
use crate::lie::GradedLie;
use crate::linalg::{add_scaled, is_zero_vector, unit_vector, zero_vector, Matrix, SparseMatrix, Vector};
use crate::report::Report;
use crate::scalar::{q, sign_pow, Q};

pub type SparseVec = Vec<(usize, Q)>;

fn sparse(v: &[Q]) -> SparseVec {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

fn densify(v: &SparseVec, n: usize) -> Vector {
    let mut out = zero_vector(n);
    for (i, c) in v {
        out[*i] += c;
    }
    out
}

/// Raw structure constants, possibly violating the axioms.
#[derive(Clone, Debug, PartialEq)]
pub struct DglaData {
    pub space: GradedSpace,
    /// Column `j` is `d(e_j)`.
    pub d: SparseMatrix,
    /// `[e_i, e_j]`; absent pairs bracket to zero.
    pub brackets: BTreeMap<(usize, usize), SparseVec>,
}

impl DglaData {
    pub fn new(space: GradedSpace) -> Self {
        let n = space.dim();
        DglaData { space, d: SparseMatrix::zeros(n, n), brackets: BTreeMap::new() }
    }

    /// Structure constants of any finite-dimensional graded Lie algebra.
    pub fn from_lie<G: GradedLie>(g: &G) -> Result<Self> {
        let n = g.dim();
        let space = GradedSpace::from_degrees((0..n).map(|i| (g.basis_name(i), g.basis_degree(i))))?;
        let basis: Vec<G::Elem> = (0..n).map(|i| g.basis(i)).collect();
        let mut d = SparseMatrix::zeros(n, n);
        for (j, b) in basis.iter().enumerate() {
            for (i, c) in g.coordinates(&g.differential(b)) {
                d.add_entry(i, j, c);
            }
        }
        let mut brackets = BTreeMap::new();
        for (i, x) in basis.iter().enumerate() {
            for (j, y) in basis.iter().enumerate() {
                let v = g.coordinates(&g.bracket(x, y));
                if !v.is_empty() {
                    brackets.insert((i, j), v);
                }
            }
        }
        Ok(DglaData { space, d, brackets })
    }

    /// Sets `[a,b]` and fills `[b,a]` by graded antisymmetry.
    pub fn set_bracket(&mut self, a: usize, b: usize, v: &[Q]) {
        let sign = -sign_pow((self.space.degree(a) * self.space.degree(b)) as i64);
        self.brackets.insert((a, b), sparse(v));
        let neg: Vector = v.iter().map(|c| c * q(sign)).collect();
        self.brackets.insert((b, a), sparse(&neg));
    }

    pub fn set_d(&mut self, a: usize, v: &[Q]) {
        let n = self.space.dim();
        let mut d = self.d.filter(|_, c| c != a);
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                d.add_entry(i, a, c.clone());
            }
        }
        debug_assert_eq!(d.rows(), n);
        self.d = d;
    }

    fn bracket_basis(&self, i: usize, j: usize) -> Option<&SparseVec> {
        self.brackets.get(&(i, j))
    }

    /// `[e_i, v]` for a sparse `v`.
    fn bracket_left(&self, i: usize, v: &SparseVec) -> SparseVec {
        let mut acc = BTreeMap::new();
        for (l, c) in v {
            if let Some(b) = self.bracket_basis(i, *l) {
                accumulate(&mut acc, b, c);
            }
        }
        collect(acc)
    }

    /// `[v, e_j]` for a sparse `v`.
    fn bracket_right(&self, v: &SparseVec, j: usize) -> SparseVec {
        let mut acc = BTreeMap::new();
        for (l, c) in v {
            if let Some(b) = self.bracket_basis(*l, j) {
                accumulate(&mut acc, b, c);
            }
        }
        collect(acc)
    }

    fn d_sparse(&self, v: &SparseVec) -> SparseVec {
        let n = self.space.dim();
        sparse(&self.d.apply(&densify(v, n)))
    }

    fn d_basis(&self, j: usize) -> SparseVec {
        let n = self.space.dim();
        sparse(&self.d.apply(&unit_vector(n, j)))
    }

    fn name(&self, i: usize) -> &str {
        self.space.name(i)
    }

    fn fmt(&self, v: &SparseVec) -> String {
        format_combination(&densify(v, self.space.dim()), |i| self.space.name(i).to_string())
    }
}

fn accumulate(acc: &mut BTreeMap<usize, Q>, v: &SparseVec, c: &Q) {
    for (k, e) in v {
        *acc.entry(*k).or_insert_with(Q::zero) += c * e;
    }
}

fn collect(acc: BTreeMap<usize, Q>) -> SparseVec {
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// `a + c1*b + c2*e` as a sparse vector.
fn combine(a: &SparseVec, b: &SparseVec, c1: &Q, e: &SparseVec, c2: &Q) -> SparseVec {
    let mut acc = BTreeMap::new();
    accumulate(&mut acc, a, &q(1));
    accumulate(&mut acc, b, c1);
    accumulate(&mut acc, e, c2);
    collect(acc)
}

/// Checks degrees, `d² = 0`, graded antisymmetry, Jacobi and Leibniz on all
/// basis tuples, reporting every violated tuple.
pub fn check_dgla(data: &DglaData) -> Report {
    let mut report = Report::new();
    let sp = &data.space;
    let n = sp.dim();
    let deg = |i: usize| sp.degree(i);

    for j in 0..n {
        let dj = data.d_basis(j);
        for (i, _) in &dj {
            if deg(*i) != deg(j) + 1 {
                report.fail("d-degree", format!("d({}) has a component on {}", data.name(j), data.name(*i)));
            }
        }
        let ddj = data.d_sparse(&dj);
        if !ddj.is_empty() {
            report.fail("d-squared", format!("d(d({})) = {}", data.name(j), data.fmt(&ddj)));
        }
    }

    for (&(i, j), v) in &data.brackets {
        for (k, _) in v {
            if deg(*k) != deg(i) + deg(j) {
                report.fail(
                    "bracket-degree",
                    format!("[{},{}] has a component on {}", data.name(i), data.name(j), data.name(*k)),
                );
            }
        }
    }

    for i in 0..n {
        for j in i..n {
            let a = data.bracket_basis(i, j).cloned().unwrap_or_default();
            let b = data.bracket_basis(j, i).cloned().unwrap_or_default();
            let mut sum = densify(&a, n);
            add_scaled(&mut sum, &densify(&b, n), &q(sign_pow((deg(i) * deg(j)) as i64)));
            if !is_zero_vector(&sum) {
                report.fail(
                    "antisymmetry",
                    format!("({},{}) residual {}", data.name(i), data.name(j), data.fmt(&sparse(&sum))),
                );
            }
        }
    }

    // [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]
    for i in 0..n {
        for j in i..n {
            let xy = data.bracket_basis(i, j).cloned().unwrap_or_default();
            for k in j..n {
                let yz = data.bracket_basis(j, k).cloned().unwrap_or_default();
                let xz = data.bracket_basis(i, k).cloned().unwrap_or_default();
                let lhs = data.bracket_left(i, &yz);
                let t1 = data.bracket_right(&xy, k);
                let t2 = data.bracket_left(j, &xz);
                let res = combine(&lhs, &t1, &q(-1), &t2, &q(-sign_pow((deg(i) * deg(j)) as i64)));
                if !res.is_empty() {
                    report.fail(
                        "jacobi",
                        format!(
                            "({},{},{}) residual {}",
                            data.name(i),
                            data.name(j),
                            data.name(k),
                            data.fmt(&res)
                        ),
                    );
                }
            }
        }
    }

    // d[x,y] = [dx,y] + (-1)^{|x|} [x,dy]
    for i in 0..n {
        let di = data.d_basis(i);
        for j in 0..n {
            let dj = data.d_basis(j);
            let xy = data.bracket_basis(i, j).cloned().unwrap_or_default();
            let lhs = data.d_sparse(&xy);
            let t1 = data.bracket_right(&di, j);
            let t2 = data.bracket_left(i, &dj);
            let res = combine(&lhs, &t1, &q(-1), &t2, &q(-sign_pow(deg(i) as i64)));
            if !res.is_empty() {
                report.fail(
                    "leibniz",
                    format!("({},{}) residual {}", data.name(i), data.name(j), data.fmt(&res)),
                );
            }
        }
    }
    report
}

/// Axiom check for any implementor of [`GradedLie`], via its structure constants.
pub fn check_lie<G: GradedLie>(g: &G) -> Result<Report> {
    Ok(check_dgla(&DglaData::from_lie(g)?))
}

/// A validated DGLA with structure constants.
#[derive(Clone, Debug, PartialEq)]
pub struct Dgla {
    data: DglaData,
    table: Vec<Vec<SparseVec>>,
    d_cols: Vec<SparseVec>,
}

impl Dgla {
    /// Validates eagerly; any violated axiom is an error.
    pub fn new(data: DglaData) -> Result<Self> {
        let report = check_dgla(&data);
        if !report.passed() {
            return Err(Error::Invalid(report.lines().join("; ")));
        }
        let n = data.space.dim();
        let table = (0..n)
            .map(|i| (0..n).map(|j| data.bracket_basis(i, j).cloned().unwrap_or_default()).collect())
            .collect();
        let d_cols = (0..n).map(|j| data.d_basis(j)).collect();
        Ok(Dgla { data, table, d_cols })
    }

    pub fn data(&self) -> &DglaData {
        &self.data
    }

    pub fn space(&self) -> &GradedSpace {
        &self.data.space
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.data.space.index_of(name)
    }

    /// Parses the structure-constant text format.
    pub fn parse(text: &str) -> Result<Self> {
        Self::new(parse_dgla_data(text)?)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_text(&self) -> String {
        let sp = &self.data.space;
        let mut out = String::new();
        for b in sp.basis() {
            out.push_str(&format!("basis {} deg={}", b.name, b.degree));
            if let Some((p, q)) = b.bidegree {
                out.push_str(&format!(" bideg=({p},{q})"));
            }
            out.push('\n');
        }
        for (j, col) in self.d_cols.iter().enumerate() {
            if !col.is_empty() {
                out.push_str(&format!("d {} = {}\n", sp.name(j), self.data.fmt(col)));
            }
        }
        for (&(i, j), v) in &self.data.brackets {
            if i <= j && !v.is_empty() {
                out.push_str(&format!("bracket {} {} = {}\n", sp.name(i), sp.name(j), self.data.fmt(v)));
            }
        }
        out
    }

    pub fn format(&self, v: &[Q]) -> String {
        format_combination(v, |i| self.data.space.name(i).to_string())
    }

    pub fn parse_element(&self, s: &str) -> Result<Vector> {
        let sp = &self.data.space;
        parse_combination(s, sp.dim(), |n| sp.index_of(n))
    }

    /// `sl_2` in degree zero: `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
    pub fn sl2() -> Self {
        let space = GradedSpace::from_degrees([("e", 0), ("h", 0), ("f", 0)]).expect("distinct names");
        let mut data = DglaData::new(space);
        data.set_bracket(1, 0, &[q(2), q(0), q(0)]);
        data.set_bracket(1, 2, &[q(0), q(0), q(-2)]);
        data.set_bracket(0, 2, &[q(0), q(1), q(0)]);
        Self::new(data).expect("sl2 constants")
    }

    /// Abelian algebra with `d = 0` and the given degrees.
    pub fn abelian(degrees: &[i32]) -> Self {
        let space = GradedSpace::from_degrees(degrees.iter().enumerate().map(|(i, d)| (format!("v{}", i + 1), *d)))
            .expect("distinct names");
        Self::new(DglaData::new(space)).expect("abelian")
    }

    /// Heisenberg algebra `[x,y] = z` in degree zero.
    pub fn heisenberg() -> Self {
        let space = GradedSpace::from_degrees([("x", 0), ("y", 0), ("z", 0)]).expect("distinct names");
        let mut data = DglaData::new(space);
        data.set_bracket(0, 1, &[q(0), q(0), q(1)]);
        Self::new(data).expect("heisenberg")
    }

    /// `x` in degree 1 and `y` in degree 2 with `[x,x] = y`.
    pub fn odd_square() -> Self {
        let space = GradedSpace::from_degrees([("x", 1), ("y", 2)]).expect("distinct names");
        let mut data = DglaData::new(space);
        data.brackets.insert((0, 0), vec![(1, q(1))]);
        Self::new(data).expect("odd square")
    }

    /// `L[-1]` with trivial bracket: degrees go up by one and `d` changes sign.
    pub fn shifted_abelian(&self) -> Self {
        let sp = &self.data.space;
        let basis = sp
            .basis()
            .iter()
            .map(|b| BasisElement { name: b.name.clone(), degree: b.degree + 1, bidegree: None })
            .collect();
        let mut data = DglaData::new(GradedSpace::new(basis).expect("same names"));
        data.d = self.data.d.scale(&q(-1));
        Self::new(data).expect("shift of a complex is a complex")
    }
}

impl GradedLie for Dgla {
    type Elem = Vector;

    fn zero(&self) -> Vector {
        zero_vector(self.dim())
    }

    fn is_zero(&self, x: &Vector) -> bool {
        is_zero_vector(x)
    }

    fn add(&self, x: &Vector, y: &Vector) -> Vector {
        x.iter().zip(y).map(|(a, b)| a + b).collect()
    }

    fn scale(&self, x: &Vector, c: &Q) -> Vector {
        x.iter().map(|a| a * c).collect()
    }

    fn bracket(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = self.zero();
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in &self.table[i][j] {
                    out[*k] += &ab * c;
                }
            }
        }
        out
    }

    fn differential(&self, x: &Vector) -> Vector {
        self.data.d.apply(x)
    }

    fn homogeneous_parts(&self, x: &Vector) -> Vec<(i32, Vector)> {
        self.data.space.homogeneous_parts(x)
    }

    fn dim(&self) -> usize {
        self.data.space.dim()
    }

    fn basis(&self, i: usize) -> Vector {
        unit_vector(self.dim(), i)
    }

    fn basis_degree(&self, i: usize) -> i32 {
        self.data.space.degree(i)
    }

    fn basis_name(&self, i: usize) -> String {
        self.data.space.name(i).to_string()
    }

    fn coordinates(&self, x: &Vector) -> Vec<(usize, Q)> {
        sparse(x)
    }
}

/// Parses the structure-constant format without validating the axioms.
pub fn parse_dgla_data(text: &str) -> Result<DglaData> {
    let mut basis = Vec::new();
    let mut rest = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let (kw, tail) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match kw {
            "basis" => {
                let mut toks = tail.split_whitespace();
                let name = toks.next().ok_or_else(|| Error::Parse(format!("line {}: missing name", no + 1)))?;
                let mut degree = None;
                let mut bidegree = None;
                for t in toks {
                    if let Some(v) = t.strip_prefix("deg=") {
                        degree = Some(v.parse::<i32>().map_err(|_| Error::Parse(format!("line {}: bad degree", no + 1)))?);
                    } else if let Some(v) = t.strip_prefix("bideg=") {
                        bidegree = Some(parse_pair(v)?);
                    } else {
                        return Err(Error::Parse(format!("line {}: unexpected `{t}`", no + 1)));
                    }
                }
                let degree = match (degree, bidegree) {
                    (Some(d), _) => d,
                    (None, Some((p, q))) => p + q,
                    (None, None) => return Err(Error::Parse(format!("line {}: missing deg=", no + 1))),
                };
                basis.push(BasisElement { name: name.to_string(), degree, bidegree });
            }
            "d" | "bracket" => rest.push((no + 1, kw, tail.to_string())),
            other => return Err(Error::Parse(format!("line {}: unknown keyword `{other}`", no + 1))),
        }
    }
    let space = GradedSpace::new(basis).map_err(|e| Error::Parse(e.to_string()))?;
    let n = space.dim();
    let mut data = DglaData::new(space);
    let mut explicit = BTreeMap::new();
    for (no, kw, tail) in rest {
        let (lhs, rhs) = tail.split_once('=').ok_or_else(|| Error::Parse(format!("line {no}: missing `=`")))?;
        let v = parse_combination(rhs, n, |s| data.space.index_of(s)).map_err(|e| Error::Parse(format!("line {no}: {e}")))?;
        let names: Vec<&str> = lhs.split_whitespace().collect();
        let idx = |s: &str| data.space.index_of(s).ok_or_else(|| Error::Parse(format!("line {no}: unknown `{s}`")));
        match (kw, names.as_slice()) {
            ("d", [a]) => {
                let a = idx(a)?;
                data.set_d(a, &v);
            }
            ("bracket", [a, b]) => {
                explicit.insert((idx(a)?, idx(b)?), sparse(&v));
            }
            _ => return Err(Error::Parse(format!("line {no}: malformed `{kw}` line"))),
        }
    }
    // Missing partners are filled by antisymmetry; explicit entries always win.
    for (&(a, b), v) in &explicit {
        if !explicit.contains_key(&(b, a)) {
            let sign = -sign_pow((data.space.degree(a) * data.space.degree(b)) as i64);
            let neg: SparseVec = v.iter().map(|(k, c)| (*k, c * q(sign))).collect();
            data.brackets.insert((b, a), neg);
        }
    }
    for (k, v) in explicit {
        data.brackets.insert(k, v);
    }
    data.brackets.retain(|_, v| !v.is_empty());
    Ok(data)
}

/// A degree-zero linear map between DGLAs; column `j` is the image of `e_j`.
#[derive(Clone, Debug)]
pub struct DglaMorphism {
    source: Arc<Dgla>,
    target: Arc<Dgla>,
    map: Matrix,
}

impl DglaMorphism {
    pub fn new(source: Arc<Dgla>, target: Arc<Dgla>, map: Matrix) -> Result<Self> {
        let m = DglaMorphism { source, target, map };
        let report = m.check();
        if !report.passed() {
            return Err(Error::Invalid(report.lines().join("; ")));
        }
        Ok(m)
    }

    pub fn identity(l: Arc<Dgla>) -> Self {
        let n = l.dim();
        DglaMorphism { source: l.clone(), target: l, map: Matrix::identity(n) }
    }

    pub fn zero(source: Arc<Dgla>, target: Arc<Dgla>) -> Self {
        let map = Matrix::zeros(target.dim(), source.dim());
        DglaMorphism { source, target, map }
    }

    pub fn source(&self) -> &Arc<Dgla> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Dgla> {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.map
    }

    pub fn apply(&self, x: &[Q]) -> Vector {
        self.map.mul_vec(x)
    }

    pub fn compose(&self, after: &DglaMorphism) -> Result<DglaMorphism> {
        if self.target.as_ref() != after.source.as_ref() {
            return Err(Error::Dimension("morphisms are not composable".into()));
        }
        Ok(DglaMorphism { source: self.source.clone(), target: after.target.clone(), map: after.map.mul(&self.map) })
    }

    /// Degree, `d` and bracket compatibility on basis elements and pairs.
    pub fn check(&self) -> Report {
        let mut report = Report::new();
        let (s, t) = (&*self.source, &*self.target);
        if self.map.rows() != t.dim() || self.map.cols() != s.dim() {
            report.fail("shape", format!("{}x{}", self.map.rows(), self.map.cols()));
            return report;
        }
        for j in 0..s.dim() {
            let img = self.apply(&s.basis(j));
            for (d, _) in t.homogeneous_parts(&img) {
                if d != s.basis_degree(j) {
                    report.fail("degree", format!("image of {} has degree {d}", s.basis_name(j)));
                }
            }
            let lhs = t.differential(&img);
            let rhs = self.apply(&s.differential(&s.basis(j)));
            if lhs != rhs {
                report.fail("commutes-with-d", s.basis_name(j));
            }
        }
        for i in 0..s.dim() {
            for j in 0..s.dim() {
                let lhs = self.apply(&s.bracket(&s.basis(i), &s.basis(j)));
                let rhs = t.bracket(&self.apply(&s.basis(i)), &self.apply(&s.basis(j)));
                if lhs != rhs {
                    report.fail("preserves-bracket", format!("({},{})", s.basis_name(i), s.basis_name(j)));
                }
            }
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_algebras_pass() {
        assert!(check_dgla(Dgla::abelian(&[0]).data()).passed());
        assert!(check_dgla(Dgla::sl2().data()).passed());
        assert!(check_dgla(Dgla::heisenberg().data()).passed());
        assert!(check_dgla(Dgla::odd_square().data()).passed());
    }

    #[test]
    fn flipped_sl2_sign_is_reported() {
        let mut data = Dgla::sl2().data().clone();
        // [e,f] = -h, leaving [f,e] = -h as well
        data.brackets.insert((0, 2), vec![(1, q(-1))]);
        let report = check_dgla(&data);
        assert!(!report.passed());
        assert!(report.has("antisymmetry"));
        assert!(report.violations.iter().any(|v| v.witness.contains("(e,f)")));
        assert!(Dgla::new(data).is_err());
    }

    #[test]
    fn jacobi_violation_without_antisymmetry_failure() {
        // consistent antisymmetric constants that break Jacobi
        let mut data = Dgla::sl2().data().clone();
        data.set_bracket(0, 2, &[q(1), q(0), q(0)]);
        let report = check_dgla(&data);
        assert!(report.has("jacobi"));
        assert!(!report.has("antisymmetry"));
    }

    #[test]
    fn file_format_round_trip() {
        let text = "# sl2\nbasis e deg=0\nbasis h deg=0\nbasis f deg=0\nbracket h e = 2*e\nbracket h f = -2*f\nbracket e f = h\n";
        let l = Dgla::parse(text).unwrap();
        assert_eq!(l, Dgla::sl2());
        assert_eq!(Dgla::parse(&l.to_text()).unwrap(), l);
    }

    #[test]
    fn file_format_errors() {
        assert!(parse_dgla_data("basis x\n").is_err());
        assert!(parse_dgla_data("basis x deg=0\nbracket x y = x\n").is_err());
        assert!(parse_dgla_data("basis x deg=0\nfoo x\n").is_err());
        assert!(Dgla::parse("basis x deg=0\nbasis y deg=1\nd x = y\nd y = x\n").is_err());
    }

    #[test]
    fn bracket_is_bilinear() {
        let l = Dgla::sl2();
        let e = l.basis(0);
        let f = l.basis(2);
        assert_eq!(l.bracket(&e, &f), l.basis(1));
        let x = l.add(&e, &l.scale(&f, &q(3)));
        assert_eq!(l.bracket(&x, &x), l.zero());
    }

    #[test]
    fn morphisms() {
        let l = Arc::new(Dgla::sl2());
        let id = DglaMorphism::identity(l.clone());
        assert!(id.check().passed());
        let mut bad = Matrix::identity(3);
        bad.set(0, 0, q(2));
        assert!(DglaMorphism::new(l.clone(), l.clone(), bad).is_err());
        assert!(DglaMorphism::zero(l.clone(), l).check().passed());
    }

    #[test]
    fn shift_negates_differential() {
        let space = GradedSpace::from_degrees([("a", 0), ("b", 1)]).unwrap();
        let mut data = DglaData::new(space);
        data.set_d(0, &[q(0), q(1)]);
        let l = Dgla::new(data).unwrap();
        let s = l.shifted_abelian();
        assert_eq!(s.basis_degree(0), 1);
        assert_eq!(s.differential(&s.basis(0)), vec![q(0), q(-1)]);
    }
}
