//! The 8x8 catalecticant of a form of multidegree (2,2,2) on `(P^1)^3`, and
//! the determinantal test for the hypersurface of 7-secant points in `P^26`.
//!
//! Coefficients are indexed `z[a + 3b + 9c]`, where `a, b, c` in `{0, 1, 2}`
//! pick `x_0^2, x_0 x_1, x_1^2` in each factor. Rows are the dual monomials
//! `a_i* b_j* c_k*` at index `i + 2j + 4k`; columns are the monomials
//! `a_i b_j c_k` at index `4i + 2j + k`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf::{Field, Matrix, PrimeField};

#[derive(Debug, Clone, PartialEq)]
pub struct TensorCoefficients<F>(pub [F; 27]);

impl<F: Field> TensorCoefficients<F> {
    pub fn zero() -> Self {
        TensorCoefficients(std::array::from_fn(|_| F::zero()))
    }

    pub fn unit(m: usize) -> Self {
        let mut z = Self::zero();
        z.0[m] = F::one();
        z
    }

    pub fn from_slice(values: &[F]) -> Result<Self> {
        let arr: [F; 27] = values
            .to_vec()
            .try_into()
            .map_err(|v: Vec<F>| Error::Shape(format!("expected 27 coefficients, got {}", v.len())))?;
        Ok(TensorCoefficients(arr))
    }

    pub fn add(&self, other: &Self) -> Self {
        TensorCoefficients(std::array::from_fn(|m| self.0[m].clone() + other.0[m].clone()))
    }

    pub fn scaled(&self, by: &F) -> Self {
        TensorCoefficients(std::array::from_fn(|m| by.clone() * self.0[m].clone()))
    }
}

fn row_triple(idx: usize) -> [usize; 3] {
    [idx & 1, (idx >> 1) & 1, (idx >> 2) & 1]
}

fn col_triple(idx: usize) -> [usize; 3] {
    [(idx >> 2) & 1, (idx >> 1) & 1, idx & 1]
}

/// `(coefficient, z index)` of every entry, independent of the field.
pub fn catalecticant_pattern() -> [[(u32, usize); 8]; 8] {
    let mut out = [[(0, 0); 8]; 8];
    for (row, line) in out.iter_mut().enumerate() {
        let d = row_triple(row);
        for (col, entry) in line.iter_mut().enumerate() {
            let e = col_triple(col);
            // x_i-derivative of the monomial with x_1-exponent i + i'
            let coef: u32 = (0..3).map(|f| if d[f] == e[f] { 2 } else { 1 }).product();
            let z = (d[0] + e[0]) + 3 * (d[1] + e[1]) + 9 * (d[2] + e[2]);
            *entry = (coef, z);
        }
    }
    out
}

/// The catalecticant matrix of the form with coefficients `z`.
pub fn catalecticant<F: Field>(z: &TensorCoefficients<F>) -> Result<Matrix<F>> {
    if F::characteristic() == 2 {
        return Err(Error::Characteristic(2));
    }
    let pattern = catalecticant_pattern();
    let mut m = Matrix::zeros(8, 8);
    for (i, line) in pattern.iter().enumerate() {
        for (j, &(coef, idx)) in line.iter().enumerate() {
            m[(i, j)] = F::from_i64(coef as i64) * z.0[idx].clone();
        }
    }
    Ok(m)
}

/// Whether the catalecticant is singular, which holds on the 7-secant
/// variety.
pub fn secant_membership_test<F: Field>(z: &TensorCoefficients<F>) -> Result<bool> {
    Ok(catalecticant(z)?.determinant()?.is_zero())
}

/// Coefficients of `a^2 b^2 c^2` for linear forms given as coefficient pairs.
pub fn power_coefficients<F: Field>(a: &[F; 2], b: &[F; 2], c: &[F; 2]) -> TensorCoefficients<F> {
    let sq = |l: &[F; 2]| {
        let two = F::from_i64(2);
        [l[0].clone() * l[0].clone(), two * l[0].clone() * l[1].clone(), l[1].clone() * l[1].clone()]
    };
    let (qa, qb, qc) = (sq(a), sq(b), sq(c));
    TensorCoefficients(std::array::from_fn(|m| qa[m % 3].clone() * qb[(m / 3) % 3].clone() * qc[m / 9].clone()))
}

/// Sum of `terms` random products `a^2 b^2 c^2`.
pub fn random_secant_point<F: PrimeField, R: Rng + ?Sized>(terms: usize, rng: &mut R) -> TensorCoefficients<F> {
    let mut z = TensorCoefficients::zero();
    for _ in 0..terms {
        let mut pair = || [F::random(rng), F::random(rng)];
        let (a, b, c) = (pair(), pair(), pair());
        z = z.add(&power_coefficients(&a, &b, &c));
    }
    z
}

/// [`random_secant_point`] drawn from a ChaCha8 stream seeded with `seed`.
pub fn secant_sample<F: PrimeField>(terms: usize, seed: u64) -> TensorCoefficients<F> {
    random_secant_point(terms, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn random_coefficients<F: PrimeField, R: Rng + ?Sized>(rng: &mut R) -> TensorCoefficients<F> {
    TensorCoefficients(std::array::from_fn(|_| F::random(rng)))
}
