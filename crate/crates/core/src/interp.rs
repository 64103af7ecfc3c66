//! Interpolation conditions at random points over `F_p`: actual dimensions of
//! linear systems and, via Terracini's lemma, dimensions of secant varieties.
//!
//! Random points only ever over-estimate the dimension of a linear system
//! (the rank at special points can only drop), so a trial that reaches the
//! expected dimension is a proof of non-speciality.

use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Echelon, Matrix, PrimeField};
use crate::model::{Ambient, DimReport, FatPoints, LinearSystem, MultiDegree, Status};

/// SplitMix64 finalizer applied to `master ^ (index * golden)`.
///
/// Used for every derived seed (per trial, per sweep cell) so results do not
/// depend on evaluation order.
pub fn mix_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `t` for a computation seeded with `master`.
pub fn trial_seed(master: u64, t: usize) -> u64 {
    mix_seed(master, t as u64)
}

/// Seed for the system `L_degrees(2^n)` under `master`, independent of where
/// or in which order the system is computed.
pub fn system_seed(master: u64, degrees: &[u32], n: usize) -> u64 {
    let s = degrees.iter().fold(mix_seed(master, degrees.len() as u64), |acc, &x| mix_seed(acc, x as u64));
    mix_seed(s, n as u64)
}

/// Random points in the affine chart: for `(P^1)^r` the point
/// `([1:t_1], ..., [1:t_r])`, for `P^r` the point `[1:t_1:...:t_r]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSample<F> {
    pub coordinates: Vec<Vec<F>>,
    pub seed: u64,
}

impl<F: PrimeField> PointSample<F> {
    /// `count` pairwise distinct uniform points of `F_p^dim`.
    ///
    /// Points are drawn sequentially, so the first `k` points of a sample
    /// equal the `k`-point sample with the same seed.
    pub fn random(count: usize, dim: usize, seed: u64) -> Result<Self> {
        let space = (F::MODULUS as f64).powi(dim as i32);
        if count as f64 > space {
            return Err(Error::InvalidSystem(format!(
                "{count} distinct points requested in F_{}^{dim}",
                F::MODULUS
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut seen = HashSet::with_capacity(count);
        let mut coordinates = Vec::with_capacity(count);
        while coordinates.len() < count {
            let p: Vec<F> = (0..dim).map(|_| F::random(&mut rng)).collect();
            let key: Vec<u32> = p.iter().map(|x| x.value()).collect();
            if seen.insert(key) {
                coordinates.push(p);
            }
        }
        Ok(Self { coordinates, seed })
    }

    pub fn len(&self) -> usize {
        self.coordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coordinates.is_empty()
    }
}

/// Derivative multi-indices `alpha` in `r` variables with `|alpha| < m`,
/// by increasing order and, within one order, lexicographically decreasing
/// (so `d/dx_1` comes before `d/dx_2`).
pub fn derivative_operators(r: usize, m: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for total in 0..m {
        let mut layer = crate::model::projective_monomials(r, total)
            .into_iter()
            .filter(|a| a.iter().sum::<u32>() == total)
            .collect::<Vec<_>>();
        layer.sort_unstable_by(|a, b| b.cmp(a));
        out.extend(layer);
    }
    out
}

/// A point expressed in one affine chart: local coordinates plus the rule
/// turning a global exponent vector into local exponents.
struct ChartPoint<F> {
    coords: Vec<F>,
    chart: Chart,
}

enum Chart {
    /// Per factor, whether the chart is `x_1 = 1` (exponent `d_i - e_i`).
    Product { flipped: Vec<bool>, degrees: Vec<u32> },
    /// Chart `x_j = 1` of `P^r` in degree `d`.
    Projective { j: usize, degree: u32 },
}

impl Chart {
    fn local(&self, e: &[u32]) -> Vec<u32> {
        match self {
            Chart::Product { flipped, degrees } => e
                .iter()
                .zip(flipped.iter().zip(degrees))
                .map(|(&x, (&f, &d))| if f { d - x } else { x })
                .collect(),
            Chart::Projective { j, degree } => {
                let e0 = degree - e.iter().sum::<u32>();
                std::iter::once(e0)
                    .chain(e.iter().copied())
                    .enumerate()
                    .filter(|&(i, _)| i != *j)
                    .map(|(_, x)| x)
                    .collect()
            }
        }
    }
}

fn affine_chart<F: PrimeField>(ambient: &Ambient, coords: Vec<F>) -> ChartPoint<F> {
    let chart = match ambient {
        Ambient::ProductOfLines(d) => Chart::Product { flipped: vec![false; d.r()], degrees: d.degrees().to_vec() },
        Ambient::ProjectiveSpace { degree, .. } => Chart::Projective { j: 0, degree: *degree },
    };
    ChartPoint { coords, chart }
}

/// The rows `alpha(x^e)(p)` for every operator `alpha` and every column monomial `e`.
fn point_rows<F: PrimeField>(monomials: &[Vec<u32>], point: &ChartPoint<F>, ops: &[Vec<u32>]) -> Vec<Vec<F>> {
    let r = point.coords.len();
    let max_exp = monomials.iter().flat_map(|e| point.chart.local(e)).max().unwrap_or(0) as usize;
    // powers[i][k] = u_i^k
    let powers: Vec<Vec<F>> = point
        .coords
        .iter()
        .map(|&u| {
            let mut v = Vec::with_capacity(max_exp + 1);
            let mut acc = F::one();
            for _ in 0..=max_exp {
                v.push(acc);
                acc = acc * u;
            }
            v
        })
        .collect();
    let locals: Vec<Vec<u32>> = monomials.iter().map(|e| point.chart.local(e)).collect();
    ops.iter()
        .map(|alpha| {
            locals
                .iter()
                .map(|le| {
                    let mut acc = F::one();
                    for i in 0..r {
                        let (e, a) = (le[i], alpha[i]);
                        if a > e {
                            return F::zero();
                        }
                        for t in 0..a {
                            acc = acc * F::from_u64((e - t) as u64);
                        }
                        acc = acc * powers[i][(e - a) as usize];
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn validate_points(points: &FatPoints) -> Result<()> {
    if points.multiplicities().contains(&0) {
        return Err(Error::InvalidSystem("point of multiplicity 0".into()));
    }
    Ok(())
}

fn check_distinct<F: PrimeField>(coords: &[Vec<F>]) -> Result<()> {
    let mut seen = HashSet::new();
    for p in coords {
        if !seen.insert(p.iter().map(|x| x.value()).collect::<Vec<_>>()) {
            return Err(Error::DuplicatePoints);
        }
    }
    Ok(())
}

/// Interpolation conditions of `spec` at the sampled points: one column per
/// monomial, and for a point of multiplicity `m` one row per derivative of
/// order `< m`, evaluated in the affine chart. Rows are not normalized.
pub fn conditions_matrix<F: PrimeField>(spec: &LinearSystem, sample: &PointSample<F>) -> Result<Matrix<F>> {
    validate_points(&spec.points)?;
    if sample.len() != spec.points.len() {
        return Err(Error::Shape(format!("{} points sampled for {} fat points", sample.len(), spec.points.len())));
    }
    let dim = spec.ambient.dim();
    if sample.coordinates.iter().any(|p| p.len() != dim) {
        return Err(Error::Shape(format!("points must have {dim} affine coordinates")));
    }
    check_distinct(&sample.coordinates)?;
    let monomials = spec.ambient.monomials();
    let mut rows = Vec::with_capacity(spec.condition_count() as usize);
    for (coords, &m) in sample.coordinates.iter().zip(spec.points.multiplicities()) {
        let ops = derivative_operators(dim, m);
        rows.extend(point_rows(&monomials, &affine_chart(&spec.ambient, coords.clone()), &ops));
    }
    Matrix::from_rows(rows, monomials.len())
}

/// Rank of the conditions matrix at the sample drawn from `sample_seed`.
pub fn sample_rank<F: PrimeField>(spec: &LinearSystem, sample_seed: u64) -> Result<usize> {
    let sample = PointSample::<F>::random(spec.points.len(), spec.ambient.dim(), sample_seed)?;
    Ok(conditions_matrix(spec, &sample)?.rank())
}

fn status_of(expected: i64, dims: &[i64]) -> Status {
    if dims.contains(&expected) {
        Status::NonSpecial
    } else if dims.windows(2).all(|w| w[0] == w[1]) {
        Status::SpecialCandidate
    } else {
        Status::Inconclusive
    }
}

/// Dimension of `spec` at general points, estimated over up to `retries`
/// independent samples (stopping at the first that attains the expected
/// dimension).
pub fn dim_linear_system<F: PrimeField>(spec: &LinearSystem, seed: u64, retries: usize) -> Result<DimReport> {
    if retries == 0 {
        return Err(Error::InvalidSystem("retries must be at least 1".into()));
    }
    validate_points(&spec.points)?;
    let n_sections = spec.section_count() as i64;
    let expected = spec.expected_dimension();
    let mut dims = Vec::with_capacity(retries);
    for t in 0..retries {
        let rank = sample_rank::<F>(spec, trial_seed(seed, t))? as i64;
        let dim = n_sections - 1 - rank;
        debug_assert!(dim >= expected);
        dims.push(dim);
        if dim == expected {
            break;
        }
    }
    Ok(DimReport {
        virtual_dim: spec.virtual_dimension(),
        expected,
        computed: *dims.iter().min().expect("at least one trial"),
        status: status_of(expected, &dims),
        trials: dims.len(),
        seed,
        prime: F::MODULUS,
    })
}

/// Reports for `L_deg(2^n)` at every `n` in `0..=n_max`, with one incremental
/// elimination per trial. Entry `n` equals `dim_linear_system` on
/// `L_deg(2^n)` with the same seed and retries.
pub fn dim_profile<F: PrimeField>(deg: &MultiDegree, n_max: usize, seed: u64, retries: usize) -> Result<Vec<DimReport>> {
    if retries == 0 {
        return Err(Error::InvalidSystem("retries must be at least 1".into()));
    }
    let ambient = Ambient::ProductOfLines(deg.clone());
    let r = deg.r();
    let n_sections = deg.section_count() as i64;
    let monomials = ambient.monomials();
    let ops = derivative_operators(r, 2);
    let specs: Vec<LinearSystem> = (0..=n_max).map(|n| LinearSystem::product(deg.clone(), FatPoints::doubles(n))).collect();
    let expected: Vec<i64> = specs.iter().map(|s| s.expected_dimension()).collect();
    let mut dims: Vec<Vec<i64>> = vec![Vec::new(); n_max + 1];
    let mut done = vec![false; n_max + 1];

    for t in 0..retries {
        if done.iter().all(|&d| d) {
            break;
        }
        let sample = PointSample::<F>::random(n_max, r, trial_seed(seed, t))?;
        let mut ech = Echelon::new(monomials.len());
        for n in 0..=n_max {
            if n > 0 {
                let p = affine_chart(&ambient, sample.coordinates[n - 1].clone());
                for row in point_rows(&monomials, &p, &ops) {
                    ech.insert(row);
                }
            }
            if done[n] {
                continue;
            }
            let dim = n_sections - 1 - ech.rank() as i64;
            dims[n].push(dim);
            if dim == expected[n] {
                done[n] = true;
            }
        }
    }
    Ok(specs
        .iter()
        .zip(dims)
        .map(|(s, d)| DimReport {
            virtual_dim: s.virtual_dimension(),
            expected: s.expected_dimension(),
            computed: *d.iter().min().expect("at least one trial"),
            status: status_of(s.expected_dimension(), &d),
            trials: d.len(),
            seed,
            prime: F::MODULUS,
        })
        .collect())
}

/// Terracini matrix: one column per tangent direction, `{nu(p), d nu/dx_i (p)}`
/// for each sampled point, one row per monomial.
pub fn tangent_span_matrix<F: PrimeField>(deg: &MultiDegree, sample: &PointSample<F>) -> Result<Matrix<F>> {
    let r = deg.r();
    let monomials = deg.monomial_basis();
    let mut m = Matrix::zeros(monomials.len(), sample.len() * (r + 1));
    for (j, p) in sample.coordinates.iter().enumerate() {
        if p.len() != r {
            return Err(Error::Shape(format!("points must have {r} coordinates")));
        }
        for (row, e) in monomials.iter().enumerate() {
            // nu(p) entry: prod t_i^{e_i}
            let value: F = e.iter().zip(p).fold(F::one(), |acc, (&k, &t)| acc * pow(t, k));
            m[(row, j * (r + 1))] = value;
            for i in 0..r {
                let entry = if e[i] == 0 {
                    F::zero()
                } else {
                    e.iter().zip(p).enumerate().fold(F::from_u64(e[i] as u64), |acc, (l, (&k, &t))| {
                        acc * if l == i { pow(t, k - 1) } else { pow(t, k) }
                    })
                };
                m[(row, j * (r + 1) + 1 + i)] = entry;
            }
        }
    }
    Ok(m)
}

fn pow<F: PrimeField>(base: F, e: u32) -> F {
    (0..e).fold(F::one(), |acc, _| acc * base)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecantReport {
    pub secant_dim: i64,
    /// `min(n r + n - 1, N)`.
    pub expected_secant_dim: i64,
    pub defective: bool,
    pub trials: usize,
    pub seed: u64,
    pub prime: u32,
}

/// Dimension of the `n`-secant variety of the Segre-Veronese embedding of
/// `deg`, as the rank of `n` general tangent spaces minus one. Samples are
/// shared with [`dim_linear_system`] trial by trial.
pub fn secant_dimension<F: PrimeField>(deg: &MultiDegree, n: usize, seed: u64, retries: usize) -> Result<SecantReport> {
    if n == 0 {
        return Err(Error::InvalidSystem("secant variety of zero points".into()));
    }
    if retries == 0 {
        return Err(Error::InvalidSystem("retries must be at least 1".into()));
    }
    let r = deg.r() as i64;
    let n_proj = deg.projective_dim();
    let expected = (n as i64 * r + n as i64 - 1).min(n_proj);
    let mut best = -1;
    let mut trials = 0;
    for t in 0..retries {
        trials += 1;
        let sample = PointSample::<F>::random(n, deg.r(), trial_seed(seed, t))?;
        let rank = tangent_span_matrix(deg, &sample)?.rank() as i64;
        best = best.max(rank - 1);
        if best == expected {
            break;
        }
    }
    Ok(SecantReport {
        secant_dim: best,
        expected_secant_dim: expected,
        defective: best < expected,
        trials,
        seed,
        prime: F::MODULUS,
    })
}

/// Dimension of `spec` at explicitly given points, in homogeneous coordinates:
/// `2r` integers `[a_1, b_1, ..., a_r, b_r]` per point on `(P^1)^r`,
/// `r + 1` integers on `P^r`. Multiplicities are taken from `spec.points`
/// in order.
pub fn dim_at_specific_points<F: PrimeField>(spec: &LinearSystem, points: &[Vec<i64>]) -> Result<i64> {
    Ok(spec.section_count() as i64 - 1 - specific_conditions_matrix::<F>(spec, points)?.rank() as i64)
}

/// Conditions matrix at explicit homogeneous points; see [`dim_at_specific_points`].
pub fn specific_conditions_matrix<F: PrimeField>(spec: &LinearSystem, points: &[Vec<i64>]) -> Result<Matrix<F>> {
    validate_points(&spec.points)?;
    if points.len() != spec.points.len() {
        return Err(Error::MalformedCoordinates(format!(
            "{} points given for {} fat points",
            points.len(),
            spec.points.len()
        )));
    }
    let dim = spec.ambient.dim();
    let monomials = spec.ambient.monomials();
    let mut rows = Vec::new();
    for (hom, &m) in points.iter().zip(spec.points.multiplicities()) {
        let p = chart_point::<F>(&spec.ambient, hom)?;
        rows.extend(point_rows(&monomials, &p, &derivative_operators(dim, m)));
    }
    Matrix::from_rows(rows, monomials.len())
}

fn chart_point<F: PrimeField>(ambient: &Ambient, hom: &[i64]) -> Result<ChartPoint<F>> {
    let h: Vec<F> = hom.iter().map(|&x| F::from_i64(x)).collect();
    match ambient {
        Ambient::ProductOfLines(d) => {
            if h.len() != 2 * d.r() {
                return Err(Error::MalformedCoordinates(format!("expected {} coordinates, got {}", 2 * d.r(), h.len())));
            }
            let mut coords = Vec::with_capacity(d.r());
            let mut flipped = Vec::with_capacity(d.r());
            for pair in h.chunks(2) {
                let (a, b) = (pair[0], pair[1]);
                if !a.is_zero() {
                    coords.push(b * a.inverse().expect("nonzero"));
                    flipped.push(false);
                } else if !b.is_zero() {
                    coords.push(F::zero());
                    flipped.push(true);
                } else {
                    return Err(Error::MalformedCoordinates("[0:0] is not a point of P^1".into()));
                }
            }
            Ok(ChartPoint { coords, chart: Chart::Product { flipped, degrees: d.degrees().to_vec() } })
        }
        Ambient::ProjectiveSpace { r, degree } => {
            if h.len() != r + 1 {
                return Err(Error::MalformedCoordinates(format!("expected {} coordinates, got {}", r + 1, h.len())));
            }
            let j = h
                .iter()
                .position(|x| !x.is_zero())
                .ok_or_else(|| Error::MalformedCoordinates("all coordinates zero".into()))?;
            let inv = h[j].inverse().expect("nonzero");
            let coords = h.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &x)| x * inv).collect();
            Ok(ChartPoint { coords, chart: Chart::Projective { j, degree: *degree } })
        }
    }
}
