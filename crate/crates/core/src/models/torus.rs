//! Flat complex tori: constant-coefficient forms and polyvector fields.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::dgla::{Dgla, DglaData};
use crate::error::{Error, Result};
use crate::graded::GradedSpace;
use crate::linalg::SparseMatrix;
use crate::scalar::q;

use super::exterior::{interior, left_wedge, mask_name, wedge_sign};
use super::{BigradedModel, PolyModel, SparseVec};

/// Largest supported complex dimension.
pub const MAX_TORUS_DIM: usize = 3;

fn form_generators(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("dz{i}")).chain((1..=n).map(|i| format!("dzb{i}"))).collect()
}

fn poly_generators(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("dzb{i}")).chain((1..=n).map(|i| format!("d{i}"))).collect()
}

/// Masks sorted by `(key, name)`.
fn ordered_masks(gens: &[String], key: impl Fn(u32) -> (i32, i32)) -> Vec<u32> {
    let mut masks: Vec<u32> = (0..(1u32 << gens.len())).collect();
    masks.sort_by_key(|&m| (key(m), mask_name(m, gens)));
    masks
}

fn wedge_table(masks: &[u32]) -> BTreeMap<(usize, usize), SparseVec> {
    let pos: BTreeMap<u32, usize> = masks.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut out = BTreeMap::new();
    for (i, &a) in masks.iter().enumerate() {
        for (j, &b) in masks.iter().enumerate() {
            if let Some(s) = wedge_sign(a, b) {
                out.insert((i, j), vec![(pos[&(a | b)], q(s))]);
            }
        }
    }
    out
}

/// Forms on the torus of complex dimension `n` and its polyvector fields
/// `dz̄_J ⊗ ∂_H`, acting by `i_ξ = dz̄_J ∧ (∂_H ⌟ ·)`.
pub fn build_torus_model(n: usize) -> Result<(Arc<BigradedModel>, PolyModel)> {
    if n == 0 || n > MAX_TORUS_DIM {
        return Err(Error::Precondition(format!("torus dimension must lie in 1..={MAX_TORUS_DIM}, got {n}")));
    }
    let low = (1u32 << n) - 1;
    let high = low << n;
    let fgens = form_generators(n);
    let bideg = |m: u32| ((m & low).count_ones() as i32, (m & high).count_ones() as i32);
    let fmasks = ordered_masks(&fgens, |m| {
        let (p, qq) = bideg(m);
        (p + qq, p)
    });
    let fpos: BTreeMap<u32, usize> = fmasks.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let space = GradedSpace::from_bidegrees(fmasks.iter().map(|&m| (mask_name(m, &fgens), bideg(m))))?;
    let dim = space.dim();
    let unit = fpos[&0];
    let forms = Arc::new(BigradedModel::new(
        space,
        SparseMatrix::zeros(dim, dim),
        SparseMatrix::zeros(dim, dim),
        wedge_table(&fmasks),
        unit,
    )?);

    // Poly generators: bits 0..n are dz̄_j, bits n..2n are ∂_h
    let pgens = poly_generators(n);
    let op_bideg = |m: u32| (-((m & high).count_ones() as i32), (m & low).count_ones() as i32);
    let pmasks = ordered_masks(&pgens, |m| {
        let (a, b) = op_bideg(m);
        (a + b + 1, a)
    });
    let pspace = GradedSpace::from_degrees(pmasks.iter().map(|&m| {
        let (a, b) = op_bideg(m);
        (mask_name(m, &pgens), a + b + 1)
    }))?;
    let poly = Dgla::new(DglaData::new(pspace))?;

    let contractions = pmasks
        .iter()
        .map(|&m| {
            let mut op = SparseMatrix::zeros(dim, dim);
            for (col, &f) in fmasks.iter().enumerate() {
                let mut acc = Some((f, 1i64));
                // rightmost factor acts first: interiors by ∂_h, then wedges by dz̄_j
                for k in (0..2 * n as u32).rev().filter(|k| m & (1 << k) != 0) {
                    acc = acc.and_then(|(g, s)| {
                        let step = if k >= n as u32 { interior(k - n as u32, g) } else { left_wedge(k + n as u32, g) };
                        step.map(|(g2, t)| (g2, s * t))
                    });
                }
                if let Some((g, s)) = acc {
                    op.add_entry(fpos[&g], col, q(s));
                }
            }
            op
        })
        .collect();
    let op_bidegrees = pmasks.iter().map(|&m| op_bideg(m)).collect();
    let pm = PolyModel::new(forms.clone(), poly, op_bidegrees, contractions, Some(wedge_table(&pmasks)), false)?;
    Ok((forms, pm))
}
