//! Dimension-preserving reductions: `(P^1)^r` to `P^r`, and the Cremona
//! transformation on `P^n` that lowers the degree.

use crate::error::{Error, Result};
use crate::model::{Ambient, FatPoints, LinearSystem};

/// `L_(d_1..d_r)(2^n)` on `(P^1)^r` to `L_d(d - d_1, ..., d - d_r, 2^n)` on
/// `P^r`, with `d = d_1 + ... + d_r`. Zero multiplicities are dropped.
pub fn to_projective(spec: &LinearSystem) -> Result<LinearSystem> {
    let Ambient::ProductOfLines(deg) = &spec.ambient else {
        return Err(Error::UnsupportedReduction("input is not on a product of lines".into()));
    };
    if !spec.points.only_doubles() {
        return Err(Error::UnsupportedReduction(format!("{} has non-double points", spec.points)));
    }
    let d: u32 = deg.degrees().iter().sum();
    let mut mults: Vec<u32> = deg.degrees().iter().map(|&di| d - di).filter(|&m| m > 0).collect();
    mults.extend(spec.points.multiplicities());
    LinearSystem::projective(deg.r(), d, FatPoints::new(mults))
}

/// Cremona reduction on `P^n` at the points with indices `chosen` (exactly
/// `n + 1` distinct indices): with `k = (n-1)d - sum m_i` the degree becomes
/// `d + k` and each chosen multiplicity `m_i + k`. Points left with
/// multiplicity zero are dropped; the remaining order is preserved.
pub fn cremona_reduce(spec: &LinearSystem, chosen: &[usize]) -> Result<LinearSystem> {
    let Ambient::ProjectiveSpace { r: n, degree } = spec.ambient else {
        return Err(Error::UnsupportedReduction("Cremona reduction needs a system on P^n".into()));
    };
    let mults = spec.points.multiplicities();
    if chosen.len() != n + 1 {
        return Err(Error::ReductionNotApplicable(format!("need {} points on P^{n}, got {}", n + 1, chosen.len())));
    }
    let mut seen = vec![false; mults.len()];
    for &i in chosen {
        if i >= mults.len() || seen[i] {
            return Err(Error::ReductionNotApplicable(format!("bad point index {i}")));
        }
        seen[i] = true;
    }
    let sum: i64 = chosen.iter().map(|&i| mults[i] as i64).sum();
    let k = (n as i64 - 1) * degree as i64 - sum;
    let new_degree = degree as i64 + k;
    if new_degree < 0 {
        return Err(Error::ReductionNotApplicable(format!("degree would become {new_degree}")));
    }
    let mut out = Vec::with_capacity(mults.len());
    for (i, &m) in mults.iter().enumerate() {
        let m = if seen[i] { m as i64 + k } else { m as i64 };
        if m < 0 {
            return Err(Error::ReductionNotApplicable(format!("multiplicity would become {m}")));
        }
        if m > 0 {
            out.push(m as u32);
        }
    }
    LinearSystem::projective(n, new_degree as u32, FatPoints::new(out))
}

/// The `k` of a Cremona reduction at `chosen`, if the system lives on `P^n`.
pub fn cremona_k(spec: &LinearSystem, chosen: &[usize]) -> Option<i64> {
    let Ambient::ProjectiveSpace { r: n, degree } = spec.ambient else {
        return None;
    };
    let m = spec.points.multiplicities();
    Some((n as i64 - 1) * degree as i64 - chosen.iter().map(|&i| m[i] as i64).sum::<i64>())
}

/// Indices of the `n + 1` largest multiplicities, ties broken by index.
pub fn largest_points(spec: &LinearSystem) -> Option<Vec<usize>> {
    let n = spec.ambient.dim();
    let m = spec.points.multiplicities();
    if m.len() < n + 1 {
        return None;
    }
    let mut idx: Vec<usize> = (0..m.len()).collect();
    idx.sort_by(|&a, &b| m[b].cmp(&m[a]).then(a.cmp(&b)));
    idx.truncate(n + 1);
    Some(idx)
}

/// Apply Cremona reductions at the largest multiplicities while `k < 0`.
/// The returned chain starts with `spec` and stops at the first system where
/// `k >= 0` or the reduction does not apply.
pub fn greedy_cremona_chain(spec: &LinearSystem) -> Vec<LinearSystem> {
    let mut chain = vec![spec.clone()];
    loop {
        let cur = chain.last().expect("non-empty");
        let Some(chosen) = largest_points(cur) else { break };
        match cremona_k(cur, &chosen) {
            Some(k) if k < 0 => {}
            _ => break,
        }
        match cremona_reduce(cur, &chosen) {
            Ok(next) => chain.push(next),
            Err(_) => break,
        }
    }
    chain
}
