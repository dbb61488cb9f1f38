//! Dense matrices over the prime field and Gaussian elimination.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldElement, Modulus};

/// Row-major matrix of canonical residues. Zero rows or columns are allowed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    modulus: Modulus,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zeros(modulus: Modulus, rows: usize, cols: usize) -> Self {
        Matrix { modulus, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(modulus: Modulus, n: usize) -> Self {
        let mut m = Self::zeros(modulus, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows of canonical residues.
    pub fn from_rows(modulus: Modulus, rows: &[Vec<u64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            for &v in r {
                data.push(modulus.check(v)?);
            }
        }
        Ok(Matrix { modulus, rows: rows.len(), cols, data })
    }

    pub fn from_fn(
        modulus: Modulus,
        rows: usize,
        cols: usize,
        mut entry: impl FnMut(usize, usize) -> FieldElement,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(modulus.reduce(entry(i, j)));
            }
        }
        Matrix { modulus, rows, cols, data }
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [FieldElement] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElement>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.modulus, self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Columns `range` as a new matrix.
    pub fn columns(&self, range: std::ops::Range<usize>) -> Matrix {
        let start = range.start;
        Matrix::from_fn(self.modulus, self.rows, range.len(), |i, j| self.get(i, start + j))
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.modulus;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.mul_add(a, other.get(k, j), out.get(i, j));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.modulus;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = f.inv(self.get(r, c)).expect("nonzero pivot");
            for v in self.row_mut(r) {
                *v = f.mul(*v, inv);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in c..self.cols {
                    let v = f.sub(self.get(i, j), f.mul(factor, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{ x : self * x = 0 }`, one vector per free column.
    pub fn right_kernel(&self) -> Vec<Vec<FieldElement>> {
        let f = self.modulus;
        let mut a = self.clone();
        let pivots = a.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0; self.cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(a.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of `{ y : y * self = 0 }`.
    pub fn left_kernel(&self) -> Vec<Vec<FieldElement>> {
        self.transpose().right_kernel()
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::from_fn(self.modulus, n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j)
            } else {
                u64::from(j - n == i)
            }
        });
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(aug.columns(n..2 * n))
    }

    pub fn determinant(&self) -> Result<FieldElement> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of non-square matrix".into()));
        }
        let f = self.modulus;
        let mut a = self.clone();
        let n = self.rows;
        let mut det = 1;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| a.get(i, c) != 0) else {
                return Ok(0);
            };
            if pr != c {
                a.swap_rows(pr, c);
                det = f.neg(det);
            }
            let pv = a.get(c, c);
            det = f.mul(det, pv);
            let inv = f.inv(pv).expect("nonzero");
            for i in c + 1..n {
                let factor = f.mul(a.get(i, c), inv);
                if factor == 0 {
                    continue;
                }
                for j in c..n {
                    let v = f.sub(a.get(i, j), f.mul(factor, a.get(c, j)));
                    a.set(i, j, v);
                }
            }
        }
        Ok(det)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f97() -> Modulus {
        Modulus::new(97).unwrap()
    }

    #[test]
    fn inverse_round_trip() {
        let f = f97();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..7 {
            let a = Matrix::from_fn(f, n, n, |_, _| rng.gen_range(0..97));
            match a.inverse() {
                Ok(inv) => {
                    assert_ne!(a.determinant().unwrap(), 0);
                    assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(f, n));
                }
                Err(e) => {
                    assert_eq!(e, Error::Singular);
                    assert_eq!(a.determinant().unwrap(), 0);
                }
            }
        }
        let sing = Matrix::from_rows(f, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(sing.inverse(), Err(Error::Singular));
    }

    #[test]
    fn kernels_annihilate() {
        let f = f97();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let (r, c) = (rng.gen_range(1..7), rng.gen_range(1..7));
            let base = Matrix::from_fn(f, r, 2, |_, _| rng.gen_range(0..97));
            let mix = Matrix::from_fn(f, 2, c, |_, _| rng.gen_range(0..97));
            let a = base.mul(&mix).unwrap();
            let rk = a.rank();
            let left = a.left_kernel();
            assert_eq!(left.len(), r - rk);
            assert_eq!(a.right_kernel().len(), c - rk);
            for y in left {
                let ym = Matrix::from_rows(f, &[y]).unwrap().mul(&a).unwrap();
                assert!(ym.is_zero());
            }
        }
    }

    #[test]
    fn empty_shapes() {
        let f = f97();
        let a = Matrix::zeros(f, 3, 0);
        assert_eq!(a.rank(), 0);
        assert_eq!(a.left_kernel().len(), 3);
    }
}
