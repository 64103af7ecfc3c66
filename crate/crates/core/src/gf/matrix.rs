use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::gf::Field;

/// Dense row-major matrix over a field.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn new(rows: usize, cols: usize, data: Vec<F>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    /// Builds a matrix from equal-length rows. An empty list gives a 0x`cols` matrix.
    pub fn from_rows(rows: Vec<Vec<F>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Shape(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            data.extend(row);
        }
        Ok(Self { rows: n, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[F] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Self { rows: self.cols, cols: self.rows, data }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn scale_row(&mut self, i: usize, by: &F) {
        for x in &mut self.data[i * self.cols..(i + 1) * self.cols] {
            *x = x.clone() * by.clone();
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[F]) -> Result<Vec<F>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!("vector of length {} against {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::Shape("matrix sum of different shapes".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn scaled(&self, by: &F) -> Self {
        let data = self.data.iter().map(|a| a.clone() * by.clone()).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    /// Reduced row echelon form by Gauss-Jordan elimination; returns the
    /// reduced matrix and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let cols = m.cols;
        let mut r = 0;
        for c in 0..cols {
            if r == m.rows {
                break;
            }
            // first nonzero entry at or below row r
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inverse().expect("pivot is nonzero");
            m.scale_row(r, &inv);
            let pivot_row: Vec<F> = m.row(r)[c..].to_vec();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m[(i, c)].clone();
                if !f.is_zero() {
                    F::sub_scaled(&mut m.data[i * cols + c..(i + 1) * cols], &f, &pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Rank over the field; the matrix itself is left untouched.
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{v : M v = 0}`.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![F::zero(); self.cols];
            v[free] = F::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[(i, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Determinant of a square matrix.
    pub fn determinant(&self) -> Result<F> {
        if self.rows != self.cols {
            return Err(Error::Shape(format!("determinant of a {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(F::zero());
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det = det * pivot.clone();
            let inv = pivot.inverse().expect("pivot is nonzero");
            let pivot_row: Vec<F> = m.row(c)[c..].iter().map(|x| x.clone() * inv.clone()).collect();
            for i in c + 1..n {
                let f = m[(i, c)].clone();
                if !f.is_zero() {
                    F::sub_scaled(&mut m.data[i * n + c..(i + 1) * n], &f, &pivot_row);
                }
            }
        }
        Ok(det)
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

/// Row echelon form built one row at a time.
///
/// Stored rows are monic at their pivot and reduced against every earlier
/// pivot, so an incoming row is reduced by a single pass in insertion order.
#[derive(Debug, Clone)]
pub struct Echelon<F> {
    cols: usize,
    pivots: Vec<(usize, Vec<F>)>,
}

impl<F: Field> Echelon<F> {
    pub fn new(cols: usize) -> Self {
        Self { cols, pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Inserts a row; returns whether it increased the rank.
    pub fn insert(&mut self, mut row: Vec<F>) -> bool {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        if self.pivots.len() == self.cols {
            return false;
        }
        for (c, prow) in &self.pivots {
            let f = row[*c].clone();
            if !f.is_zero() {
                F::sub_scaled(&mut row[*c..], &f, &prow[*c..]);
            }
        }
        let Some(lead) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = row[lead].inverse().expect("leading entry is nonzero");
        for x in &mut row[lead..] {
            *x = x.clone() * inv.clone();
        }
        self.pivots.push((lead, row));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Fp;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::Zero;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type F = Fp<307>;

    fn m(rows: &[&[i64]]) -> Matrix<F> {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| F::from_i64(x)).collect()).collect(), cols).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::<F>::identity(3).rank(), 3);
        assert_eq!(Matrix::<F>::zeros(4, 6).rank(), 0);
        let a = m(&[&[1, 2], &[2, 4]]);
        // 2x2 determinant oracle: 1*4 - 2*2 = 0, entries nonzero, so rank 1
        assert_eq!(F::from_i64(4 - 2 * 2), F::zero());
        assert_eq!(a.rank(), 1);
        assert_eq!(a, m(&[&[1, 2], &[2, 4]]), "input untouched");
    }

    #[test]
    fn shape_is_checked() {
        assert!(Matrix::<F>::new(2, 3, vec![F::zero(); 5]).is_err());
        assert!(Matrix::<F>::zeros(2, 3).determinant().is_err());
    }

    #[test]
    fn determinant_small() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        // 2(12-1) - 1(4-0) = 18
        assert_eq!(a.determinant().unwrap(), F::new(18));
        let q = Matrix::<BigRational>::from_rows(
            vec![
                vec![BigRational::from_i64(1), BigRational::from_i64(2)],
                vec![BigRational::from_i64(3), BigRational::from_i64(4)],
            ],
            2,
        )
        .unwrap();
        assert_eq!(q.determinant().unwrap(), BigRational::from_integer(BigInt::from(-2)));
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let a = m(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 1]]);
        let k = a.kernel();
        assert_eq!(k.len(), 4 - a.rank());
        for v in k {
            assert!(a.apply(&v).unwrap().iter().all(|x| x.is_zero()));
        }
    }

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, density: f64) -> Matrix<F> {
        let data = (0..rows * cols)
            .map(|_| if rng.gen_bool(density) { F::new(rng.gen_range(0..307)) } else { F::zero() })
            .collect();
        Matrix::new(rows, cols, data).unwrap()
    }

    #[test]
    fn random_square_matrices_are_mostly_full_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [2usize, 5, 10] {
            let trials = 1000;
            let full = (0..trials).filter(|_| random_matrix(&mut rng, n, n, 1.0).rank() == n).count();
            let freq = full as f64 / trials as f64;
            assert!(freq >= 1.0 - 2.0 * n as f64 / 307.0, "n={n} freq={freq}");
        }
    }

    proptest! {
        #[test]
        fn rank_equals_rank_of_transpose(seed in any::<u64>(), rows in 0usize..9, cols in 0usize..9) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_matrix(&mut rng, rows, cols, 0.4);
            prop_assert_eq!(a.rank(), a.transpose().rank());
            prop_assert!(a.rank() <= rows.min(cols));
        }

        #[test]
        fn rank_invariant_under_row_operations(seed in any::<u64>(), rows in 1usize..8, cols in 1usize..8, s in 1u64..307) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_matrix(&mut rng, rows, cols, 0.5);
            let mut b = a.clone();
            b.swap_rows(0, rows - 1);
            b.scale_row(rows / 2, &F::new(s));
            prop_assert_eq!(a.rank(), b.rank());
        }

        #[test]
        fn incremental_echelon_agrees_with_gauss_jordan(seed in any::<u64>(), rows in 0usize..10, cols in 1usize..10) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_matrix(&mut rng, rows, cols, 0.3);
            let mut e = Echelon::new(cols);
            for i in 0..rows {
                e.insert(a.row(i).to_vec());
            }
            prop_assert_eq!(e.rank(), a.rank());
        }
    }
}
