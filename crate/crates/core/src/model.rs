//! Multi-degrees, monomial bases, fat-point schemes and the virtual /
//! expected dimension bookkeeping shared by every other module.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Multi-degree `(d_1, ..., d_r)` of a line bundle on `(P^1)^r`.
///
/// Degrees are kept in the order given; use [`MultiDegree::sorted`] or
/// [`MultiDegree::normalized`] for a canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiDegree(Vec<u32>);

impl MultiDegree {
    pub fn new(degrees: Vec<u32>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::DegenerateDegrees);
        }
        Ok(Self(degrees))
    }

    pub fn degrees(&self) -> &[u32] {
        &self.0
    }

    /// Number of factors `r`.
    pub fn r(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&d| d as u64).sum()
    }

    /// `prod (d_i + 1)`.
    pub fn section_count(&self) -> u64 {
        self.0.iter().fold(1u64, |acc, &d| acc.saturating_mul(d as u64 + 1))
    }

    /// `N = prod (d_i + 1) - 1`.
    pub fn projective_dim(&self) -> i64 {
        self.section_count() as i64 - 1
    }

    pub fn sorted(&self) -> Self {
        let mut d = self.0.clone();
        d.sort_unstable();
        Self(d)
    }

    /// Sorted, with zero-degree factors dropped. `None` when every degree is zero.
    pub fn normalized(&self) -> Option<Self> {
        let mut d: Vec<u32> = self.0.iter().copied().filter(|&x| x > 0).collect();
        if d.is_empty() {
            return None;
        }
        d.sort_unstable();
        Some(Self(d))
    }

    pub fn monomial_basis(&self) -> Vec<Vec<u32>> {
        monomial_basis(self)
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

/// All exponent vectors `e` with `0 <= e_i <= d_i`, lexicographic in `(e_1, ..., e_r)`.
pub fn monomial_basis(deg: &MultiDegree) -> Vec<Vec<u32>> {
    let d = deg.degrees();
    let mut out = Vec::with_capacity(deg.section_count() as usize);
    let mut e = vec![0u32; d.len()];
    loop {
        out.push(e.clone());
        // odometer with the last coordinate fastest
        let mut i = d.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if e[i] < d[i] {
                e[i] += 1;
                for x in &mut e[i + 1..] {
                    *x = 0;
                }
                break;
            }
        }
    }
}

/// Affine exponent vectors in `r` variables of total degree `<= d`, lexicographic.
///
/// These are the degree-`d` monomials of `P^r` in the chart `x_0 = 1`.
pub fn projective_monomials(r: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, left: usize, budget: u32, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(prefix.clone());
            return;
        }
        for e in 0..=budget {
            prefix.push(e);
            rec(prefix, left - 1, budget - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(r), r, d, &mut out);
    out
}

/// Ordered list of point multiplicities.
///
/// Order matters only to operations that pick points by index (Cremona
/// reduction); dimensions never depend on it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FatPoints(Vec<u32>);

impl FatPoints {
    pub fn new(multiplicities: Vec<u32>) -> Self {
        Self(multiplicities)
    }

    /// `n` double points.
    pub fn doubles(n: usize) -> Self {
        Self(vec![2; n])
    }

    /// From `(multiplicity, count)` groups, in the given order.
    pub fn from_groups(groups: &[(u32, usize)]) -> Self {
        Self(groups.iter().flat_map(|&(m, c)| std::iter::repeat_n(m, c)).collect())
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_multiplicity(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// `(multiplicity, count)` groups by decreasing multiplicity.
    pub fn groups(&self) -> Vec<(u32, usize)> {
        let mut m = self.0.clone();
        m.sort_unstable_by(|a, b| b.cmp(a));
        let mut out: Vec<(u32, usize)> = Vec::new();
        for x in m {
            match out.last_mut() {
                Some((y, c)) if *y == x => *c += 1,
                _ => out.push((x, 1)),
            }
        }
        out
    }

    pub fn only_doubles(&self) -> bool {
        self.0.iter().all(|&m| m == 2)
    }

    /// Linear conditions imposed on an `ambient_dim`-dimensional variety:
    /// `sum C(m - 1 + r, r)`.
    pub fn condition_count(&self, ambient_dim: usize) -> u64 {
        self.0
            .iter()
            .filter(|&&m| m > 0)
            .map(|&m| binomial(m as u64 - 1 + ambient_dim as u64, ambient_dim as u64))
            .sum()
    }
}

impl fmt::Display for FatPoints {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (m, c)) in self.groups().into_iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if c == 1 {
                write!(f, "{m}")?;
            } else {
                write!(f, "{m}^{c}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ambient {
    /// `(P^1)^r` with a multi-degree.
    ProductOfLines(MultiDegree),
    /// `P^r` with a single degree.
    ProjectiveSpace { r: usize, degree: u32 },
}

impl Ambient {
    /// Dimension of the ambient variety.
    pub fn dim(&self) -> usize {
        match self {
            Ambient::ProductOfLines(d) => d.r(),
            Ambient::ProjectiveSpace { r, .. } => *r,
        }
    }

    pub fn section_count(&self) -> u64 {
        match self {
            Ambient::ProductOfLines(d) => d.section_count(),
            Ambient::ProjectiveSpace { r, degree } => binomial(*degree as u64 + *r as u64, *r as u64),
        }
    }

    /// Exponent vectors indexing the columns of condition matrices.
    pub fn monomials(&self) -> Vec<Vec<u32>> {
        match self {
            Ambient::ProductOfLines(d) => monomial_basis(d),
            Ambient::ProjectiveSpace { r, degree } => projective_monomials(*r, *degree),
        }
    }
}

/// A linear system: ambient variety, degree data and fat points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearSystem {
    pub ambient: Ambient,
    pub points: FatPoints,
}

impl LinearSystem {
    pub fn product(degree: MultiDegree, points: FatPoints) -> Self {
        Self { ambient: Ambient::ProductOfLines(degree), points }
    }

    /// `L_(d_1..d_r)(2^n)`.
    pub fn doubles(degrees: &[u32], n: usize) -> Result<Self> {
        Ok(Self::product(MultiDegree::new(degrees.to_vec())?, FatPoints::doubles(n)))
    }

    pub fn projective(r: usize, degree: u32, points: FatPoints) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidSystem("projective space of dimension 0".into()));
        }
        Ok(Self { ambient: Ambient::ProjectiveSpace { r, degree }, points })
    }

    pub fn section_count(&self) -> u64 {
        self.ambient.section_count()
    }

    pub fn condition_count(&self) -> u64 {
        self.points.condition_count(self.ambient.dim())
    }

    /// `section_count - 1 - condition_count`.
    pub fn virtual_dimension(&self) -> i64 {
        self.section_count() as i64 - 1 - self.condition_count() as i64
    }

    /// `max(virtual, -1)`.
    pub fn expected_dimension(&self) -> i64 {
        self.virtual_dimension().max(-1)
    }

    pub fn multi_degree(&self) -> Option<&MultiDegree> {
        match &self.ambient {
            Ambient::ProductOfLines(d) => Some(d),
            Ambient::ProjectiveSpace { .. } => None,
        }
    }
}

impl fmt::Display for LinearSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.ambient {
            Ambient::ProductOfLines(d) => write!(f, "L_{d}({})", self.points),
            Ambient::ProjectiveSpace { r, degree } => write!(f, "L_{degree}({}) on P^{r}", self.points),
        }
    }
}

pub fn virtual_dimension(spec: &LinearSystem) -> i64 {
    spec.virtual_dimension()
}

pub fn expected_dimension(spec: &LinearSystem) -> i64 {
    spec.expected_dimension()
}

/// `(n-, n+)`: floor and ceiling of `prod (d_i + 1) / (r + 1)`.
pub fn critical_range(deg: &MultiDegree) -> (usize, usize) {
    let s = deg.section_count();
    let q = deg.r() as u64 + 1;
    ((s / q) as usize, s.div_ceil(q) as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    NonSpecial,
    SpecialCandidate,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::NonSpecial => "non_special",
            Status::SpecialCandidate => "special_candidate",
            Status::Inconclusive => "inconclusive",
        })
    }
}

/// Outcome of a randomized dimension computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimReport {
    #[serde(rename = "virtual")]
    pub virtual_dim: i64,
    pub expected: i64,
    pub computed: i64,
    pub status: Status,
    pub trials: usize,
    pub seed: u64,
    pub prime: u32,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn deg(d: &[u32]) -> MultiDegree {
        MultiDegree::new(d.to_vec()).unwrap()
    }

    #[test]
    fn monomial_basis_examples() {
        assert_eq!(monomial_basis(&deg(&[1, 1])), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(monomial_basis(&deg(&[2, 2, 2])).len(), 27);
        assert_eq!(monomial_basis(&deg(&[0])), vec![vec![0]]);
        let b = monomial_basis(&deg(&[2, 0, 3]));
        assert_eq!(b.len(), 12);
        assert!(b.windows(2).all(|w| w[0] < w[1]), "strictly lexicographic");
    }

    #[test]
    fn projective_monomial_count() {
        for r in 1..5 {
            for d in 0..7 {
                let m = projective_monomials(r, d);
                assert_eq!(m.len() as u64, binomial(d as u64 + r as u64, r as u64));
                assert!(m.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn virtual_and_expected_examples() {
        let s = LinearSystem::doubles(&[2, 2, 2], 7).unwrap();
        assert_eq!(s.virtual_dimension(), -2);
        assert_eq!(s.expected_dimension(), -1);
        assert_eq!(LinearSystem::doubles(&[1, 1, 1, 1], 3).unwrap().virtual_dimension(), 0);
        assert_eq!(LinearSystem::doubles(&[3, 4], 0).unwrap().virtual_dimension(), 19);
        assert_eq!(LinearSystem::doubles(&[1, 1], 1).unwrap().expected_dimension(), 0);
        assert_eq!(LinearSystem::doubles(&[2, 4], 5).unwrap().expected_dimension(), -1);
    }

    #[test]
    fn projective_sections_and_conditions() {
        // L_6(4^3, 2^7) on P^3: 84 sections, 3*20 + 7*4 conditions
        let s = LinearSystem::projective(3, 6, FatPoints::from_groups(&[(4, 3), (2, 7)])).unwrap();
        assert_eq!(s.section_count(), 84);
        assert_eq!(s.condition_count(), 88);
        assert_eq!(s.to_string(), "L_6(4^3,2^7) on P^3");
    }

    #[test]
    fn critical_range_examples() {
        assert_eq!(critical_range(&deg(&[2, 2, 2])), (6, 7));
        assert_eq!(critical_range(&deg(&[1, 1, 1, 1])), (3, 4));
        assert_eq!(critical_range(&deg(&[1, 1])), (1, 2));
    }

    #[test]
    fn normalization_drops_zero_factors() {
        assert_eq!(deg(&[3, 0, 1]).normalized(), Some(deg(&[1, 3])));
        assert_eq!(deg(&[0, 0]).normalized(), None);
        assert!(MultiDegree::new(vec![]).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn virtual_dimension_is_permutation_symmetric(
                mut d in proptest::collection::vec(0u32..6, 1..6),
                n in 0usize..40,
                rot in 0usize..6,
            ) {
                let a = LinearSystem::doubles(&d, n).unwrap().virtual_dimension();
                let len = d.len();
                d.rotate_left(rot % len);
                d.reverse();
                let b = LinearSystem::doubles(&d, n).unwrap().virtual_dimension();
                prop_assert_eq!(a, b);
                let r = d.len() as i64;
                let prod: i64 = d.iter().map(|&x| x as i64 + 1).product();
                prop_assert_eq!(b, prod - 1 - (r + 1) * n as i64);
            }

            #[test]
            fn critical_range_brackets_virtual_dimension(d in proptest::collection::vec(0u32..7, 1..6)) {
                let deg = MultiDegree::new(d.clone()).unwrap();
                let (lo, hi) = critical_range(&deg);
                prop_assert!(lo <= hi && hi <= lo + 1);
                let r = d.len() as i64;
                let v_hi = LinearSystem::doubles(&d, hi).unwrap().virtual_dimension();
                let v_lo = LinearSystem::doubles(&d, lo).unwrap().virtual_dimension();
                prop_assert!(v_hi <= r);
                prop_assert!(v_lo >= -r);
                // sharper: v(n-) = (S mod (r+1)) - 1 and v(n+) <= -1
                prop_assert!((-1..r).contains(&v_lo));
                prop_assert!(v_hi <= -1 && v_hi >= -r - 1);
            }
        }
    }
}
