//! Small fixed algebras and morphisms used by the test suites and `selftest`.

use std::sync::Arc;

use crate::cone::Cone;
use crate::dgla::{Dgla, DglaData};
use crate::endo::EndDgla;
use crate::graded::GradedSpace;
use crate::lie::GradedLie;
use crate::linalg::{Matrix, SparseMatrix};
use crate::scalar::{q, Q};

/// `sl_2 ⊗ Q[ε]` with `ε` odd of degree 1, `ε² = 0` and `d = 0`.
pub fn sl2_dual() -> Dgla {
    let names = ["e", "h", "f", "e'", "h'", "f'"];
    let degrees = [0, 0, 0, 1, 1, 1];
    let space = GradedSpace::from_degrees(names.iter().zip(degrees).map(|(n, d)| (*n, d))).expect("names");
    let sl2 = Dgla::sl2();
    let mut data = DglaData::new(space);
    for i in 0..3 {
        for j in 0..3 {
            let v = sl2.bracket(&sl2.basis(i), &sl2.basis(j));
            let mut lifted = vec![q(0); 6];
            let mut shifted = vec![q(0); 6];
            for k in 0..3 {
                lifted[k] = v[k].clone();
                shifted[k + 3] = v[k].clone();
            }
            if v.iter().any(|c| c != &q(0)) {
                data.brackets.insert((i, j), sparse(&lifted));
                data.brackets.insert((i, j + 3), sparse(&shifted));
                data.brackets.insert((i + 3, j), sparse(&shifted));
            }
        }
    }
    Dgla::new(data).expect("sl2 ⊗ Q[ε] is a DGLA")
}

fn sparse(v: &[Q]) -> Vec<(usize, Q)> {
    v.iter().enumerate().filter(|(_, c)| *c != &q(0)).map(|(i, c)| (i, c.clone())).collect()
}

/// The complex `a -> b` with `a` in degree 0 and `b` in degree 1.
pub fn two_cell_complex() -> EndDgla {
    let space = GradedSpace::from_degrees([("a", 0), ("b", 1)]).expect("names");
    EndDgla::new(space, SparseMatrix::from_triplets(2, 2, [(1, 0, q(1))])).expect("complex")
}

/// `Hom*(V,V)` of [`two_cell_complex`] as a structure-constant DGLA.
pub fn two_cell_end() -> Dgla {
    Dgla::new(DglaData::from_lie(&two_cell_complex()).expect("names")).expect("End is a DGLA")
}

/// The complex `a, b -> c` with `a, b` in degree 0, `c` in degree 1 and `da = c`.
pub fn three_cell_complex() -> EndDgla {
    let space = GradedSpace::from_degrees([("a", 0), ("b", 0), ("c", 1)]).expect("names");
    EndDgla::new(space, SparseMatrix::from_triplets(3, 3, [(2, 0, q(1))])).expect("complex")
}

pub fn three_cell_end() -> Dgla {
    Dgla::new(DglaData::from_lie(&three_cell_complex()).expect("names")).expect("End is a DGLA")
}

/// Operators preserving the subcomplex `span{b}` of [`two_cell_complex`],
/// with their inclusion into [`two_cell_end`].
pub fn two_cell_upper() -> (Dgla, Matrix) {
    let end = two_cell_complex();
    // E(a<-a), E(b<-a), E(b<-b) in End's index a*n+b
    let keep = [0usize, 2, 3];
    let ops: Vec<SparseMatrix> = keep.iter().map(|&i| end.basis(i)).collect();
    let sub = crate::endo::SubEnd::new(Arc::new(end.clone()), ops, "u").expect("independent");
    let l = Dgla::new(DglaData::from_lie(&sub).expect("names")).expect("subalgebra");
    let mut chi = Matrix::zeros(4, 3);
    for (c, &i) in keep.iter().enumerate() {
        chi.set(i, c, q(1));
    }
    (l, chi)
}

/// Cone of a structure-constant morphism.
pub fn matrix_cone(l: Dgla, m: Dgla, chi: Matrix) -> Cone<Dgla, Dgla> {
    Cone::new(l, m, move |x: &Vec<Q>| chi.mul_vec(x))
}

/// Five fixed morphisms `χ: L -> M` with `dim ≤ 6`.
pub fn cone_instances() -> Vec<(&'static str, Cone<Dgla, Dgla>)> {
    let sl2 = Dgla::sl2();
    let mut out = Vec::new();
    out.push(("id-sl2", matrix_cone(sl2.clone(), sl2.clone(), Matrix::identity(3))));

    let cartan = Dgla::abelian(&[0]);
    let mut h = Matrix::zeros(3, 1);
    h.set(1, 0, q(1));
    out.push(("cartan-in-sl2", matrix_cone(cartan, sl2.clone(), h)));

    let mut inc = Matrix::zeros(6, 3);
    for i in 0..3 {
        inc.set(i, i, q(1));
    }
    out.push(("sl2-in-dual", matrix_cone(sl2, sl2_dual(), inc)));

    let end = two_cell_end();
    out.push(("id-end", matrix_cone(end.clone(), end.clone(), Matrix::identity(4))));

    let (upper, chi) = two_cell_upper();
    out.push(("upper-in-end", matrix_cone(upper, end, chi)));
    out
}

/// Unit, classes in `(1,0)`, `(0,1)`, `(1,1)` and one square; two
/// Kodaira-Spencer fields, one moving a class and one inside the square.
pub const CORNERS_MODEL: &str = "\
dot (0,0)
dot (1,0)
dot (0,1)
dot (1,1)
square (0,0)
poly ks1 = dot2<-dot1
poly ks2 = sq1.dbc<-sq1.dc
";

/// A Kodaira-Spencer field whose contraction of a class is not `∂`-closed,
/// so its cohomology class needs a `∂̄`-correction.
pub const TWISTED_MODEL: &str = "\
dot (0,0)
dot (1,0)
dot (0,1)
square (0,0)
poly ks = dot2<-dot1 + sq1.dbc<-dot1
";

/// Two degree-2 fields; only the second pairs to zero with every class.
pub const OBSTRUCTION_MODEL: &str = "\
dot (0,0)
dot (1,0)
dot (1,1)
square (0,0)
poly xi1 = dot2<-dot1
poly xi2 = sq1.ddbc<-dot1
";

/// `Poly` with `D ξ = η` acting on a square; `l` is injective.
pub const INJECTIVE_L_MODEL: &str = "\
dot (0,0)
square (0,0)
poly xi = sq1.c<-1
poly eta = -1*sq1.dbc<-1
D xi = eta
require l-injective
";

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgla::{check_dgla, DglaMorphism};

    #[test]
    fn instances_are_dgla_morphisms() {
        assert!(check_dgla(sl2_dual().data()).passed());
        for (name, cone) in cone_instances() {
            let l = Arc::new(cone.source().clone());
            let m = Arc::new(cone.target().clone());
            let mut cols = Vec::new();
            for i in 0..l.dim() {
                cols.push(cone.chi(&l.basis(i)));
            }
            let mat = Matrix::from_columns(&cols, m.dim());
            assert!(DglaMorphism::new(l, m, mat).is_ok(), "{name}");
        }
    }
}
