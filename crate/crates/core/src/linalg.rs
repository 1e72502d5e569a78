//! Exact linear algebra over `Q`: dense elimination for solving, sparse
//! matrices for operators.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::scalar::Q;

pub type Vector = Vec<Q>;

pub fn zero_vector(n: usize) -> Vector {
    vec![Q::zero(); n]
}

pub fn unit_vector(n: usize, i: usize) -> Vector {
    let mut v = zero_vector(n);
    v[i] = Q::one();
    v
}

pub fn is_zero_vector(v: &[Q]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn add_scaled(acc: &mut [Q], v: &[Q], c: &Q) {
    if c.is_zero() {
        return;
    }
    for (a, b) in acc.iter_mut().zip(v) {
        if !b.is_zero() {
            *a += b * c;
        }
    }
}

pub fn vec_add(a: &[Q], b: &[Q]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Q], b: &[Q]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[Q], c: &Q) -> Vector {
    a.iter().map(|x| x * c).collect()
}

/// Column order in which elimination looks for pivots. Different orders give
/// different (equally valid) particular solutions and kernel bases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PivotOrder {
    #[default]
    Natural,
    Reversed,
}

impl PivotOrder {
    fn columns(self, n: usize) -> Vec<usize> {
        match self {
            PivotOrder::Natural => (0..n).collect(),
            PivotOrder::Reversed => (0..n).rev().collect(),
        }
    }
}

/// Dense rational matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Q>>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![zero_vector(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vector>, cols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == cols));
        Matrix { rows: rows.len(), cols, data: rows }
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(columns: &[Vector], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.data[i][j] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i]
    }

    pub fn column(&self, j: usize) -> Vector {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vector {
        self.data
            .iter()
            .map(|r| {
                let mut s = Q::zero();
                for (a, b) in r.iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s += a * b;
                    }
                }
                s
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k][j];
                    if !b.is_zero() {
                        out.data[i][j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j][i] = self.data[i][j].clone();
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| is_zero_vector(r))
    }

    /// Reduced row echelon form, searching pivot columns in `order`.
    pub fn rref(&self, order: PivotOrder) -> Rref {
        let mut a = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in order.columns(self.cols) {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let inv = Q::one() / &a[r][c];
            for x in a[r].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
            let pivot_row = a[r].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: Matrix { rows: self.rows, cols: self.cols, data: a }, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref(PivotOrder::Natural).pivots.len()
    }

    /// Basis of `{x : Mx = 0}`; one vector per free column.
    pub fn nullspace(&self, order: PivotOrder) -> Vec<Vector> {
        let rref = self.rref(order);
        let pivot_set: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &p in &rref.pivots {
                v[p] = true;
            }
            v
        };
        order
            .columns(self.cols)
            .into_iter()
            .filter(|&f| !pivot_set[f])
            .map(|f| {
                let mut x = zero_vector(self.cols);
                x[f] = Q::one();
                for (r, &p) in rref.pivots.iter().enumerate() {
                    x[p] = -rref.matrix.data[r][f].clone();
                }
                x
            })
            .collect()
    }
}

pub struct Rref {
    pub matrix: Matrix,
    /// Pivot column of each nonzero row, in row order.
    pub pivots: Vec<usize>,
}

/// Outcome of [`solve_linear`]; unsolvability is a value, not an error.
#[derive(Clone, Debug, PartialEq)]
pub enum LinearSolution {
    Solved { particular: Vector, nullspace: Vec<Vector> },
    Unsolvable,
}

impl LinearSolution {
    pub fn particular(&self) -> Option<&Vector> {
        match self {
            LinearSolution::Solved { particular, .. } => Some(particular),
            LinearSolution::Unsolvable => None,
        }
    }
}

/// Solves `Mx = b` exactly; free variables of the particular solution are zero.
pub fn solve_linear(m: &Matrix, b: &[Q], order: PivotOrder) -> LinearSolution {
    assert_eq!(b.len(), m.rows(), "right-hand side has wrong length");
    let mut aug = Matrix::zeros(m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug.data[i][j] = m.data[i][j].clone();
        }
        aug.data[i][m.cols] = b[i].clone();
    }
    // Pivot search excludes the augmented column; inconsistency shows up as a
    // zero row with nonzero right-hand side.
    let cols = order.columns(m.cols);
    let mut a = aug.data;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = Q::one() / &a[r][c];
        for x in a[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[m.cols].is_zero()) {
        return LinearSolution::Unsolvable;
    }
    let mut particular = zero_vector(m.cols);
    for (i, &p) in pivots.iter().enumerate() {
        particular[p] = a[i][m.cols].clone();
    }
    LinearSolution::Solved { particular, nullspace: m.nullspace(order) }
}

/// Row-reduced basis of the span of `vectors` (all of length `n`).
pub fn span_basis(vectors: &[Vector], n: usize) -> Vec<Vector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_rows(vectors.to_vec(), n);
    let rref = m.rref(PivotOrder::Natural);
    rref.matrix.data.into_iter().take(rref.pivots.len()).collect()
}

pub fn span_dim(vectors: &[Vector], n: usize) -> usize {
    span_basis(vectors, n).len()
}

pub fn in_span(vectors: &[Vector], v: &[Q], n: usize) -> bool {
    if is_zero_vector(v) {
        return true;
    }
    let base = span_dim(vectors, n);
    let mut all = vectors.to_vec();
    all.push(v.to_vec());
    span_dim(&all, n) == base
}

/// Basis of the intersection of two subspaces of `Q^n`.
pub fn intersect_spans(a: &[Vector], b: &[Vector], n: usize) -> Vec<Vector> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // x in span(a) and span(b): sum u_i a_i - sum w_j b_j = 0.
    let mut cols: Vec<Vector> = a.to_vec();
    cols.extend(b.iter().map(|v| v.iter().map(|x| -x).collect::<Vector>()));
    let m = Matrix::from_columns(&cols, n);
    let kernel = m.nullspace(PivotOrder::Natural);
    let vecs: Vec<Vector> = kernel
        .iter()
        .map(|k| {
            let mut x = zero_vector(n);
            for (i, ai) in a.iter().enumerate() {
                add_scaled(&mut x, ai, &k[i]);
            }
            x
        })
        .collect();
    span_basis(&vecs, n)
}

/// Sparse rational matrix keyed by `(row, col)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Q>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries.insert((i, i), Q::one());
        }
        m
    }

    pub fn from_triplets(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, Q)>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, j, v) in triplets {
            m.add_entry(i, j, v);
        }
        m
    }

    pub fn from_dense(d: &Matrix) -> Self {
        let mut m = Self::zeros(d.rows(), d.cols());
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                if !d.get(i, j).is_zero() {
                    m.entries.insert((i, j), d.get(i, j).clone());
                }
            }
        }
        m
    }

    pub fn to_dense(&self) -> Matrix {
        let mut d = Matrix::zeros(self.rows, self.cols);
        for (&(i, j), v) in &self.entries {
            d.set(i, j, v.clone());
        }
        d
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Q)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_entry(&mut self, i: usize, j: usize, v: Q) {
        if v.is_zero() {
            return;
        }
        let e = self.entries.entry((i, j)).or_insert_with(Q::zero);
        *e += v;
        if e.is_zero() {
            self.entries.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, j), v) in &other.entries {
            out.add_entry(i, j, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, j), v) in &other.entries {
            out.add_entry(i, j, -v.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Matrix product `self * other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "composition of incompatible operators");
        let mut by_row: BTreeMap<usize, Vec<(usize, &Q)>> = BTreeMap::new();
        for (&(k, j), v) in &other.entries {
            by_row.entry(k).or_default().push((j, v));
        }
        let mut acc: BTreeMap<(usize, usize), Q> = BTreeMap::new();
        for (&(i, k), a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(j, b) in row {
                    *acc.entry((i, j)).or_insert_with(Q::zero) += a * b;
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        SparseMatrix { rows: self.rows, cols: other.cols, entries: acc }
    }

    pub fn apply(&self, v: &[Q]) -> Vector {
        let mut out = zero_vector(self.rows);
        for (&(i, j), a) in &self.entries {
            if !v[j].is_zero() {
                out[i] += a * &v[j];
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|(&(i, j), v)| ((j, i), v.clone())).collect(),
        }
    }

    /// Keeps only the entries accepted by `keep(row, col)`.
    pub fn filter(&self, keep: impl Fn(usize, usize) -> bool) -> Self {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().filter(|(&(i, j), _)| keep(i, j)).map(|(k, v)| (*k, v.clone())).collect(),
        }
    }
}
