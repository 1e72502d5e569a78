//! Exterior algebras on odd generators, basis monomials encoded as bit masks
//! with generators in increasing order.

/// Sign of `e_A ∧ e_B`, or `None` when the masks overlap.
pub fn wedge_sign(a: u32, b: u32) -> Option<i64> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    for k in 0..32 {
        if b & (1 << k) != 0 {
            swaps += (a >> (k + 1)).count_ones();
        }
    }
    Some(if swaps.is_multiple_of(2) { 1 } else { -1 })
}

/// `e_k ∧ e_A`.
pub fn left_wedge(k: u32, mask: u32) -> Option<(u32, i64)> {
    if mask & (1 << k) != 0 {
        return None;
    }
    let before = (mask & ((1 << k) - 1)).count_ones();
    Some((mask | (1 << k), if before.is_multiple_of(2) { 1 } else { -1 }))
}

/// Interior product by the dual of `e_k`, a left derivation.
pub fn interior(k: u32, mask: u32) -> Option<(u32, i64)> {
    if mask & (1 << k) == 0 {
        return None;
    }
    let before = (mask & ((1 << k) - 1)).count_ones();
    Some((mask & !(1 << k), if before.is_multiple_of(2) { 1 } else { -1 }))
}

/// Monomial name: generator names joined by `.`, or `1`.
pub fn mask_name(mask: u32, gens: &[String]) -> String {
    let parts: Vec<&str> = (0..gens.len()).filter(|k| mask & (1 << k) != 0).map(|k| gens[k].as_str()).collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(".")
    }
}
