//! Graded vector spaces, the Koszul sign rule, complexes and their cohomology.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{
    add_scaled, is_zero_vector, solve_linear, span_basis, span_dim, zero_vector, LinearSolution, Matrix,
    PivotOrder, SparseMatrix, Vector,
};
use crate::scalar::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub name: String,
    pub degree: i32,
    pub bidegree: Option<(i32, i32)>,
}

/// Finite-dimensional graded space with a named basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    basis: Vec<BasisElement>,
    index: BTreeMap<String, usize>,
}

impl GradedSpace {
    pub fn new(basis: Vec<BasisElement>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, b) in basis.iter().enumerate() {
            if let Some((p, q)) = b.bidegree {
                if p + q != b.degree {
                    return Err(Error::Invalid(format!(
                        "basis element `{}` has degree {} but bidegree ({p},{q})",
                        b.name, b.degree
                    )));
                }
            }
            if index.insert(b.name.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate basis name `{}`", b.name)));
            }
        }
        Ok(GradedSpace { basis, index })
    }

    /// Space from `(name, degree)` pairs.
    pub fn from_degrees<S: Into<String>>(items: impl IntoIterator<Item = (S, i32)>) -> Result<Self> {
        Self::new(items.into_iter().map(|(n, d)| BasisElement { name: n.into(), degree: d, bidegree: None }).collect())
    }

    /// Space from `(name, (p, q))` pairs; degree is `p + q`.
    pub fn from_bidegrees<S: Into<String>>(items: impl IntoIterator<Item = (S, (i32, i32))>) -> Result<Self> {
        Self::new(
            items
                .into_iter()
                .map(|(n, (p, q))| BasisElement { name: n.into(), degree: p + q, bidegree: Some((p, q)) })
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.basis[i].degree
    }

    pub fn bidegree(&self, i: usize) -> Option<(i32, i32)> {
        self.basis[i].bidegree
    }

    pub fn name(&self, i: usize) -> &str {
        &self.basis[i].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Sorted list of degrees that occur.
    pub fn degrees(&self) -> Vec<i32> {
        let mut d: Vec<i32> = self.basis.iter().map(|b| b.degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn indices_in_degree(&self, k: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.basis[i].degree == k).collect()
    }

    /// Degree of a vector if it is homogeneous and nonzero.
    pub fn degree_of(&self, v: &[Q]) -> Option<i32> {
        let mut deg = None;
        for (i, x) in v.iter().enumerate() {
            if num_traits::Zero::is_zero(x) {
                continue;
            }
            match deg {
                None => deg = Some(self.basis[i].degree),
                Some(d) if d != self.basis[i].degree => return None,
                _ => {}
            }
        }
        deg
    }

    /// Splits a vector into nonzero homogeneous components.
    pub fn homogeneous_parts(&self, v: &[Q]) -> Vec<(i32, Vector)> {
        let mut parts: BTreeMap<i32, Vector> = BTreeMap::new();
        for (i, x) in v.iter().enumerate() {
            if num_traits::Zero::is_zero(x) {
                continue;
            }
            parts.entry(self.basis[i].degree).or_insert_with(|| zero_vector(self.dim()))[i] = x.clone();
        }
        parts.into_iter().collect()
    }
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::Dimension(format!("permutation of length {} against {n} degrees", perm.len())));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::Invalid(format!("{perm:?} is not a permutation of 0..{n}")));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Koszul sign `e` with `x_{perm[0]} ... x_{perm[n-1]} = e * x_0 ... x_{n-1}` in a
/// graded-commutative algebra, `degrees[i]` being the degree of `x_i`.
///
/// Every sign in the crate is computed here or in [`antisymmetric_koszul_sign`].
pub fn koszul_sign(perm: &[usize], degrees: &[i32]) -> Result<i32> {
    check_permutation(perm, degrees.len())?;
    let mut odd_inversions = 0usize;
    for a in 0..perm.len() {
        if degrees[perm[a]].rem_euclid(2) == 0 {
            continue;
        }
        for b in a + 1..perm.len() {
            if perm[a] > perm[b] && degrees[perm[b]].rem_euclid(2) == 1 {
                odd_inversions += 1;
            }
        }
    }
    Ok(if odd_inversions.is_multiple_of(2) { 1 } else { -1 })
}

/// Sign of a permutation (Koszul sign with all degrees odd).
pub fn permutation_sign(perm: &[usize]) -> Result<i32> {
    koszul_sign(perm, &vec![1; perm.len()])
}

/// Koszul sign for graded exterior powers: `sgn(perm) * koszul_sign(perm, degrees)`.
pub fn antisymmetric_koszul_sign(perm: &[usize], degrees: &[i32]) -> Result<i32> {
    Ok(permutation_sign(perm)? * koszul_sign(perm, degrees)?)
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).expect("successor exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// `(k, n-k)` unshuffles: permutations with increasing first `k` and last `n-k` entries.
pub fn unshuffles(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn rec(start: usize, k: usize, n: usize, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if chosen.len() == k {
            let mut p = chosen.clone();
            p.extend((0..n).filter(|i| !chosen.contains(i)));
            out.push(p);
            return;
        }
        for i in start..n {
            chosen.push(i);
            rec(i + 1, k, n, chosen, out);
            chosen.pop();
        }
    }
    rec(0, k, n, &mut chosen, &mut out);
    out
}

/// A cochain complex: graded space with a degree +1 differential.
#[derive(Clone, Debug)]
pub struct Complex {
    space: GradedSpace,
    differential: SparseMatrix,
}

impl Complex {
    pub fn new(space: GradedSpace, differential: SparseMatrix) -> Result<Self> {
        let n = space.dim();
        if differential.rows() != n || differential.cols() != n {
            return Err(Error::Dimension("differential must be square on the space".into()));
        }
        for (i, j, _) in differential.entries() {
            if space.degree(i) != space.degree(j) + 1 {
                return Err(Error::Degree(format!(
                    "differential sends `{}` to `{}`, not of degree +1",
                    space.name(j),
                    space.name(i)
                )));
            }
        }
        if !differential.compose(&differential).is_zero() {
            return Err(Error::Invalid("differential does not square to zero".into()));
        }
        Ok(Complex { space, differential })
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn differential(&self) -> &SparseMatrix {
        &self.differential
    }

    pub fn cohomology(&self) -> Cohomology {
        self.cohomology_with(PivotOrder::Natural)
    }

    pub fn cohomology_with(&self, order: PivotOrder) -> Cohomology {
        let n = self.space.dim();
        let dense = self.differential.to_dense();
        let mut degrees = BTreeMap::new();
        for k in self.space.degrees() {
            let idx = self.space.indices_in_degree(k);
            let sub = Matrix::from_columns(&idx.iter().map(|&j| dense.column(j)).collect::<Vec<_>>(), n);
            let cycles: Vec<Vector> = sub
                .nullspace(order)
                .into_iter()
                .map(|c| {
                    let mut v = zero_vector(n);
                    for (a, &j) in idx.iter().enumerate() {
                        v[j] = c[a].clone();
                    }
                    v
                })
                .collect();
            let boundaries: Vec<Vector> = span_basis(
                &self.space.indices_in_degree(k - 1).iter().map(|&j| dense.column(j)).collect::<Vec<_>>(),
                n,
            );
            let mut reps = Vec::new();
            let mut acc = boundaries.clone();
            let mut cur = span_dim(&acc, n);
            for z in cycles.iter() {
                acc.push(z.clone());
                let d = span_dim(&acc, n);
                if d > cur {
                    reps.push(z.clone());
                    cur = d;
                } else {
                    acc.pop();
                }
            }
            degrees.insert(k, CohomologyDegree { cycles_dim: cycles.len(), boundaries, representatives: reps });
        }
        Cohomology { dim: n, degrees, differential: self.differential.clone() }
    }
}

#[derive(Clone, Debug)]
pub struct CohomologyDegree {
    pub cycles_dim: usize,
    pub boundaries: Vec<Vector>,
    pub representatives: Vec<Vector>,
}

/// Cohomology with chosen representatives and the maps between classes and forms.
#[derive(Clone, Debug)]
pub struct Cohomology {
    dim: usize,
    degrees: BTreeMap<i32, CohomologyDegree>,
    differential: SparseMatrix,
}

impl Cohomology {
    pub fn degree(&self, k: i32) -> Option<&CohomologyDegree> {
        self.degrees.get(&k)
    }

    /// `dim H^k`.
    pub fn betti(&self, k: i32) -> usize {
        self.degrees.get(&k).map_or(0, |d| d.representatives.len())
    }

    /// `dim H^k` by rank-nullity, independent of the representatives.
    pub fn betti_by_rank(&self, k: i32) -> usize {
        self.degrees.get(&k).map_or(0, |d| d.cycles_dim - d.boundaries.len())
    }

    pub fn total_dim(&self) -> usize {
        self.degrees.values().map(|d| d.representatives.len()).sum()
    }

    pub fn representatives(&self, k: i32) -> &[Vector] {
        self.degrees.get(&k).map_or(&[], |d| &d.representatives)
    }

    /// Class → representative.
    pub fn representative(&self, k: i32, coords: &[Q]) -> Vector {
        let mut v = zero_vector(self.dim);
        for (r, c) in self.representatives(k).iter().zip(coords) {
            add_scaled(&mut v, r, c);
        }
        v
    }

    /// Representative → class; `None` if `v` is not a cycle of degree `k`.
    pub fn class_of(&self, k: i32, v: &[Q]) -> Option<Vector> {
        if !is_zero_vector(&self.differential.apply(v)) {
            return None;
        }
        let deg = self.degrees.get(&k)?;
        let mut cols = deg.representatives.clone();
        cols.extend(deg.boundaries.iter().cloned());
        let m = Matrix::from_columns(&cols, self.dim);
        match solve_linear(&m, v, PivotOrder::Natural) {
            LinearSolution::Solved { particular, .. } => Some(particular[..deg.representatives.len()].to_vec()),
            LinearSolution::Unsolvable => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn koszul_examples() {
        assert_eq!(koszul_sign(&[1, 0], &[1, 1]).unwrap(), -1);
        assert_eq!(koszul_sign(&[1, 0], &[0, 1]).unwrap(), 1);
        assert_eq!(koszul_sign(&[1, 2, 0], &[1, 1, 1]).unwrap(), 1);
        assert!(koszul_sign(&[0, 1], &[1]).is_err());
        assert!(koszul_sign(&[0, 0], &[1, 1]).is_err());
    }

    #[test]
    fn unshuffle_counts() {
        assert_eq!(unshuffles(2, 4).len(), 6);
        assert_eq!(unshuffles(0, 3), vec![vec![0, 1, 2]]);
        assert_eq!(permutations(4).len(), 24);
    }

    #[test]
    fn trivial_complexes() {
        let s = GradedSpace::from_degrees([("x", 0)]).unwrap();
        let c = Complex::new(s, SparseMatrix::zeros(1, 1)).unwrap();
        assert_eq!(c.cohomology().betti(0), 1);

        let s = GradedSpace::from_degrees([("x", 0), ("y", 1)]).unwrap();
        let d = SparseMatrix::from_triplets(2, 2, [(1, 0, q(1))]);
        let h = Complex::new(s, d).unwrap().cohomology();
        assert_eq!(h.total_dim(), 0);
    }

    #[test]
    fn rejects_bad_differentials() {
        let s = GradedSpace::from_degrees([("x", 0), ("y", 0)]).unwrap();
        let d = SparseMatrix::from_triplets(2, 2, [(1, 0, q(1))]);
        assert!(Complex::new(s, d).is_err());
    }

    #[test]
    fn class_maps_round_trip() {
        // x(0) -> y(1), z(1) closed, w(1) with dw = 0: H^1 = 2-dim.
        let s = GradedSpace::from_degrees([("x", 0), ("y", 1), ("z", 1)]).unwrap();
        let d = SparseMatrix::from_triplets(3, 3, [(1, 0, q(1)), (2, 0, q(1))]);
        let h = Complex::new(s, d).unwrap().cohomology();
        assert_eq!(h.betti(1), 1);
        assert_eq!(h.betti_by_rank(1), 1);
        let rep = h.representative(1, &[q(3)]);
        assert_eq!(h.class_of(1, &rep).unwrap(), vec![q(3)]);
        // y + z is exact.
        assert_eq!(h.class_of(1, &[q(0), q(1), q(1)]).unwrap(), vec![q(0)]);
    }
}
