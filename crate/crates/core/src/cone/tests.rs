use super::*;
use crate::dgla::Dgla;
use crate::linalg::Matrix;
use crate::samples::{cone_instances, matrix_cone, three_cell_end, two_cell_end};
use crate::scalar::{bernoulli_akiyama_tanigawa, qr};

fn id_cone(m: Dgla) -> Cone<Dgla, Dgla> {
    let n = m.dim();
    matrix_cone(m.clone(), m, Matrix::identity(n))
}

#[test]
fn linfty_relations_hold_through_arity_three() {
    for (name, cone) in cone_instances() {
        let r = cone.brackets().check_linfty(3);
        assert!(r.passed(), "{name}: {r}");
    }
}

#[test]
fn third_bracket_coefficient_is_one_twelfth() {
    let cone = id_cone(Dgla::sl2());
    let b = bernoulli_akiyama_tanigawa(8);
    for n in 2..=MAX_ARITY {
        let expected = b[n - 1].clone() * q(sign_pow(n as i64 - 1)) / factorial(n - 1);
        assert_eq!(cone.brackets().coefficient(n), expected, "n = {n}");
    }
    assert_eq!(cone.brackets().coefficient(3), qr(1, 12));
    assert_eq!(cone.brackets().coefficient(4), q(0));
}

#[test]
fn brackets_are_graded_antisymmetric() {
    for (name, cone) in cone_instances() {
        let br = cone.brackets();
        let basis = br.basis();
        for (da, _, a) in &basis {
            for (db, _, b) in &basis {
                let ab = br.mu2(a, b);
                let ba = br.mu2(b, a);
                let s = q(-sign_pow((da * db) as i64));
                assert_eq!(ab, br.scale(&ba, &s), "{name}");
                for (dc, _, c) in &basis {
                    let abc = br.mu(&[a.clone(), b.clone(), c.clone()]);
                    let bac = br.mu(&[b.clone(), a.clone(), c.clone()]);
                    let acb = br.mu(&[a.clone(), c.clone(), b.clone()]);
                    assert_eq!(abc, br.scale(&bac, &s), "{name}");
                    assert_eq!(abc, br.scale(&acb, &q(-sign_pow((db * dc) as i64))), "{name}");
                }
            }
        }
    }
}

#[test]
fn degrees_of_brackets() {
    for (name, cone) in cone_instances() {
        let br = cone.brackets();
        let basis = br.basis();
        for (da, _, a) in &basis {
            for (db, _, b) in &basis {
                let v = br.mu2(a, b);
                if let Some(d) = br.degree_of(&v) {
                    assert_eq!(d, da + db, "{name}");
                }
                for (dc, _, c) in &basis {
                    let v = br.mu(&[a.clone(), b.clone(), c.clone()]);
                    if let Some(d) = br.degree_of(&v) {
                        assert_eq!(d, da + db + dc - 1, "{name}");
                    }
                }
            }
        }
    }
}

#[test]
fn mu_n_rejects_low_arity() {
    let cone = id_cone(Dgla::sl2());
    let br = cone.brackets();
    let z = br.zero();
    assert!(br.mu_n(&[z.clone(), z.clone()]).is_err());
    assert!(br.mu_n(&[z.clone(), z.clone(), z]).is_ok());
}

/// All `c` of degree 1 with coefficients in `{0, ±1}` on monomials of `m_A`.
fn lattice_of(over: &ConeOver<'_, Dgla, Dgla>) -> Vec<ExtElem<Dgla, Dgla>> {
    let ring = over.ring().clone();
    let mut slots: Vec<(bool, usize)> = Vec::new();
    for b in 0..over.lx.base().dim() {
        if over.lx.base().basis_degree(b) == 1 {
            for mono in 1..ring.dim() {
                slots.push((true, b * ring.dim() + mono));
            }
        }
    }
    for b in 0..over.mx.base().dim() {
        if over.mx.base().basis_degree(b) == 0 {
            for mono in 1..ring.dim() {
                slots.push((false, b * ring.dim() + mono));
            }
        }
    }
    let mut out = Vec::new();
    let total = 3usize.pow(slots.len() as u32);
    for mut code in 0..total {
        let mut l = over.lx.zero();
        let mut m = over.mx.zero();
        for &(is_l, idx) in &slots {
            let c = q((code % 3) as i64 - 1);
            code /= 3;
            if c.is_zero() {
                continue;
            }
            if is_l {
                l = over.lx.add(&l, &over.lx.scale(&over.lx.basis(idx), &c));
            } else {
                m = over.mx.add(&m, &over.mx.scale(&over.mx.basis(idx), &c));
            }
        }
        out.push(ConeElem { l, m });
    }
    out
}

fn calibrate(cone: &Cone<Dgla, Dgla>, ring: &Arc<ArtinAlgebra>) -> (usize, usize) {
    let over = cone.over(ring);
    let mut positives = 0;
    let mut disagreements = 0;
    for c in lattice_of(&over) {
        let (cone_mc, _) = over.mc_cone_check(&c).unwrap();
        let chi = over.mc_chi_check(&over.cone_to_mcchi(&c)).unwrap();
        if cone_mc {
            positives += 1;
        }
        if cone_mc != chi.holds {
            disagreements += 1;
        }
    }
    (positives, disagreements)
}

#[test]
fn calibration_over_truncated_cubic() {
    let ring = ArtinAlgebra::truncated("t", 3);
    let (pos, bad) = calibrate(&id_cone(two_cell_end()), &ring);
    assert_eq!(bad, 0);
    assert!(pos > 1);
}

#[test]
fn calibration_over_square_zero_plane() {
    let ring = ArtinAlgebra::new(&["s", "t"], &[vec![2, 0], vec![1, 1], vec![0, 2]]).unwrap();
    let (pos, bad) = calibrate(&id_cone(two_cell_end()), &ring);
    assert_eq!(bad, 0);
    assert!(pos > 1);
}

#[test]
fn calibration_over_truncated_quartic() {
    let ring = ArtinAlgebra::truncated("t", 4);
    let cone = id_cone(two_cell_end());
    let (pos, bad) = calibrate(&cone, &ring);
    assert_eq!(bad, 0);
    assert!(pos > 1);
}

fn constructed_mc(over: &ConeOver<'_, Dgla, Dgla>, a: &Ext<Vec<Q>>) -> McChi<Vec<Q>, Vec<Q>> {
    // for χ = id, x = e^{-a} * 0 satisfies both equations
    let x = over.mx.gauge_act(&over.mx.neg(a), &over.mx.zero()).unwrap();
    McChi { x, a: a.clone() }
}

#[test]
fn constructed_elements_are_cone_mc_in_larger_end() {
    let ring = ArtinAlgebra::truncated("t", 4);
    let cone = id_cone(three_cell_end());
    let over = cone.over(&ring);
    let t = ring.var("t").unwrap();
    let deg0: Vec<usize> = (0..9).filter(|&i| over.mx.base().basis_degree(i) == 0).collect();
    for (k, &i) in deg0.iter().enumerate() {
        for &j in &deg0[k..] {
            let a = over.mx.add(
                &over.mx.lift(&over.mx.base().basis(i), &t),
                &over.mx.lift(&over.mx.base().basis(j), &t.pow(2)),
            );
            let e = constructed_mc(&over, &a);
            assert!(over.mc_chi_check(&e).unwrap().holds);
            let (ok, r) = over.mc_cone_check(&over.mcchi_to_cone(&e)).unwrap();
            assert!(ok, "{r:?}");
        }
    }
}

#[test]
fn flipped_third_bracket_breaks_constructed_elements() {
    let ring = ArtinAlgebra::truncated("t", 4);
    let cone = id_cone(three_cell_end()).with_flipped_sign(3);
    let over = cone.over(&ring);
    let t = ring.var("t").unwrap();
    let names = ["E(a<-a)", "E(a<-b)", "E(b<-a)", "E(c<-c)"];
    let mut broken = 0;
    for x in names {
        for y in names {
            let bx = over.mx.base().basis(over.mx.base().index_of(x).unwrap());
            let by = over.mx.base().basis(over.mx.base().index_of(y).unwrap());
            let a = over.mx.add(&over.mx.lift(&bx, &t), &over.mx.lift(&by, &t.pow(2)));
            let e = constructed_mc(&over, &a);
            let (ok, _) = over.mc_cone_check(&over.mcchi_to_cone(&e)).unwrap();
            if !ok {
                broken += 1;
            }
        }
    }
    assert!(broken > 0);
}

#[test]
fn cone_mc_rejects_wrong_degree_and_constants() {
    let ring = ArtinAlgebra::truncated("t", 3);
    let cone = id_cone(two_cell_end());
    let over = cone.over(&ring);
    let one = ring.one();
    let t = ring.var("t").unwrap();
    let x1 = over.lx.base().basis(over.lx.base().index_of("E(b<-a)").unwrap());
    let c: ExtElem<Dgla, Dgla> = ConeElem { l: over.lx.lift(&x1, &one), m: over.mx.zero() };
    assert!(over.mc_cone_check(&c).is_err());
    let x0 = over.lx.base().basis(over.lx.base().index_of("E(a<-a)").unwrap());
    let c: ExtElem<Dgla, Dgla> = ConeElem { l: over.lx.lift(&x0, &t), m: over.mx.zero() };
    assert!(matches!(over.mc_cone_check(&c), Err(Error::Degree(_))));
}

#[test]
fn gauge_action_preserves_mc_and_composes() {
    let ring = ArtinAlgebra::truncated("t", 4);
    let cone = id_cone(three_cell_end());
    let over = cone.over(&ring);
    let base = over.mx.base();
    let t = ring.var("t").unwrap();
    let at = |name: &str| base.basis(base.index_of(name).unwrap());
    let a = over.mx.add(&over.mx.lift(&at("E(a<-b)"), &t), &over.mx.lift(&at("E(b<-a)"), &t.pow(2)));
    let e = constructed_mc(&over, &a);
    let g = GaugePair {
        l: over.lx.add(&over.lx.lift(&at("E(b<-b)"), &t), &over.lx.lift(&at("E(a<-b)"), &t)),
        m: over.mx.lift(&at("E(a<-c)"), &t),
    };
    let h = GaugePair { l: over.lx.lift(&at("E(b<-a)"), &t), m: over.mx.lift(&at("E(b<-c)"), &t.pow(2)) };
    let ge = over.gauge_act_chi(&g, &e).unwrap();
    assert!(over.mc_chi_check(&ge).unwrap().holds);
    assert!(over.mc_cone_check(&over.mcchi_to_cone(&ge)).unwrap().0);
    let hge = over.gauge_act_chi(&h, &ge).unwrap();
    let (l, b) = over.compose_gauge(&h, &g).unwrap();
    assert_eq!(hge, over.act_by_exponents(&l, &b, &e).unwrap());
    let bad = GaugePair { l: g.l.clone(), m: over.mx.lift(&at("E(a<-a)"), &t) };
    assert!(over.gauge_act_chi(&bad, &e).is_err());
}

#[test]
fn nested_sum_of_small_arity() {
    let m = Dgla::sl2();
    let e = m.basis(0);
    let v = nested_bracket_sum(&m, std::slice::from_ref(&e), std::slice::from_ref(&e), &[0]);
    assert_eq!(v, e);
    let h = m.basis(1);
    let v = nested_bracket_sum(&m, &[e.clone(), m.zero()], &[m.zero(), h.clone()], &[0, 0]);
    assert_eq!(v, m.bracket(&e, &h));
}


#[test]
fn second_bracket_matches_closed_formula() {
    for (name, cone) in cone_instances() {
        let br = cone.brackets();
        let (l, m) = (cone.source(), cone.target());
        let basis = br.basis();
        for (d1, _, a) in &basis {
            for (_, _, b) in &basis {
                let half = qr(1, 2);
                let first = m.scale(&m.bracket(&a.m, &cone.chi(&b.l)), &half);
                let second = m.scale(&m.bracket(&cone.chi(&a.l), &b.m), &(half * q(sign_pow(*d1 as i64))));
                let expected = ConeElem { l: l.bracket(&a.l, &b.l), m: m.add(&first, &second) };
                assert_eq!(br.mu2(a, b), expected, "{name}");
            }
        }
    }
}

#[test]
fn first_projection_is_strict() {
    for (name, cone) in cone_instances() {
        let br = cone.brackets();
        let l = cone.source();
        let basis = br.basis();
        for (_, _, a) in &basis {
            assert_eq!(br.mu1(a).l, l.differential(&a.l), "{name}");
            for (_, _, b) in &basis {
                assert_eq!(br.mu2(a, b).l, l.bracket(&a.l, &b.l), "{name}");
                for (_, _, c) in &basis {
                    assert!(l.is_zero(&br.mu(&[a.clone(), b.clone(), c.clone()]).l), "{name}");
                }
            }
        }
    }
}

#[test]
fn mu1_squares_to_zero_and_has_expected_kernel() {
    for (name, cone) in cone_instances() {
        let br = cone.brackets();
        for (_, _, a) in br.basis() {
            assert!(br.is_zero(&br.mu1(&br.mu1(&a))), "{name}");
        }
    }
    // χ injective: μ₁(l,m) = 0 iff dl = 0 and dm = χ(l), so the kernel is {(dm, m)}
    let cone = id_cone(three_cell_end());
    let br = cone.brackets();
    let m = cone.target();
    let n = m.dim();
    let cols: Vec<Vec<Q>> = br
        .basis()
        .iter()
        .map(|(_, _, c)| {
            let v = br.mu1(c);
            v.l.iter().chain(v.m.iter()).cloned().collect()
        })
        .collect();
    let kernel = Matrix::from_columns(&cols, 2 * n).nullspace(crate::linalg::PivotOrder::Natural);
    assert_eq!(kernel.len(), n);
    for y in 0..n {
        let c = ConeElem { l: m.differential(&m.basis(y)), m: m.basis(y) };
        assert!(br.is_zero(&br.mu1(&c)));
    }
}

#[test]
fn higher_brackets_vanish_without_m_components() {
    let cone = id_cone(three_cell_end());
    let br = cone.brackets();
    let ls: Vec<_> = br.basis().into_iter().filter(|(_, n, _)| n.starts_with("L:")).map(|(_, _, c)| c).collect();
    for a in &ls {
        for b in &ls {
            for c in &ls {
                assert!(br.is_zero(&br.mu(&[a.clone(), b.clone(), c.clone()])));
            }
        }
    }
}

#[test]
fn zero_source_with_trivial_differential_accepts_everything() {
    // L = 0 and M = sl2 ⊗ Q[ε] with d = 0
    let m = crate::samples::sl2_dual();
    let cone = matrix_cone(Dgla::abelian(&[]), m.clone(), Matrix::zeros(m.dim(), 0));
    let ring = ArtinAlgebra::truncated("t", 4);
    let over = cone.over(&ring);
    let t = ring.var("t").unwrap();
    for i in 0..3 {
        for j in 0..3 {
            let a = over.mx.add(&over.mx.lift(&m.basis(i), &t), &over.mx.lift(&m.basis(j), &t.pow(2)));
            let e = McChi { x: over.lx.zero(), a };
            assert!(over.mc_chi_check(&e).unwrap().holds);
            assert!(over.mc_cone_check(&over.mcchi_to_cone(&e)).unwrap().0);
        }
    }
}

#[test]
fn flat_x_with_wrong_gauge_fails_second_equation() {
    let ring = ArtinAlgebra::truncated("t", 3);
    let cone = id_cone(two_cell_end());
    let over = cone.over(&ring);
    let base = over.lx.base();
    let t = ring.var("t").unwrap();
    let x = over.lx.lift(&base.basis(base.index_of("E(b<-a)").unwrap()), &t);
    let e = McChi { x, a: over.mx.zero() };
    let r = over.mc_chi_check(&e).unwrap();
    assert!(over.lx.is_zero(&r.flatness));
    assert!(!over.mx.is_zero(&r.gauge));
    assert!(!r.holds);
    let zero = McChi { x: over.lx.zero(), a: over.mx.zero() };
    assert!(over.mc_chi_check(&zero).unwrap().holds);
    assert_eq!(over.cone_to_mcchi(&over.mcchi_to_cone(&e)), e);
}

#[test]
fn identity_gauge_and_pure_m_gauge() {
    let ring = ArtinAlgebra::truncated("t", 4);
    let cone = id_cone(three_cell_end());
    let over = cone.over(&ring);
    let base = over.mx.base();
    let t = ring.var("t").unwrap();
    let at = |name: &str| base.basis(base.index_of(name).unwrap());
    let a = over.mx.lift(&at("E(a<-b)"), &t);
    let e = constructed_mc(&over, &a);
    let id = GaugePair { l: over.lx.zero(), m: over.mx.zero() };
    assert_eq!(over.gauge_act_chi(&id, &e).unwrap(), e);
    let m = over.mx.lift(&at("E(a<-c)"), &t);
    let g = GaugePair { l: over.lx.zero(), m: m.clone() };
    let ge = over.gauge_act_chi(&g, &e).unwrap();
    assert_eq!(ge.x, e.x);
    assert_eq!(ge.a, over.mx.bch(&over.mx.differential(&m), &a).unwrap());
}

#[test]
fn commuting_square_maps_mc_elements() {
    let (upper, inc) = crate::samples::two_cell_upper();
    let end = two_cell_end();
    let first = matrix_cone(upper, end.clone(), inc.clone());
    let second = id_cone(end);
    let ring = ArtinAlgebra::truncated("t", 3);
    let (o1, o2) = (first.over(&ring), second.over(&ring));
    let mut mapped = 0;
    for c in lattice_of(&o1) {
        let e = o1.cone_to_mcchi(&c);
        if !o1.mc_chi_check(&e).unwrap().holds {
            continue;
        }
        let image = McChi { x: e.x.map(|v| inc.mul_vec(v)), a: e.a.clone() };
        assert!(o2.mc_chi_check(&image).unwrap().holds);
        mapped += 1;
    }
    assert!(mapped > 1);
}
