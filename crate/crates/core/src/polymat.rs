//! Polynomial matrices and the shifted-degree machinery: row degrees,
//! leading matrices, pivots, and the reduced / weak Popov / Popov forms.
//!
//! Row and column indices are 0-based. Pivot ties are broken towards the
//! largest column index.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElement, Modulus};
use crate::linalg::Matrix;
use crate::poly::Poly;

/// Integer column weights added to entry degrees.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Shift(Vec<i64>);

impl Shift {
    pub fn new(entries: Vec<i64>) -> Self {
        Shift(entries)
    }

    pub fn zeros(m: usize) -> Self {
        Shift(vec![0; m])
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<i64> {
        self.0
    }

    /// `s + delta`, entrywise.
    pub fn plus_degrees(&self, delta: &[usize]) -> Shift {
        assert_eq!(self.len(), delta.len());
        Shift(self.0.iter().zip(delta).map(|(&s, &d)| s + d as i64).collect())
    }

    /// `s + c * (1, ..., 1)`.
    pub fn translate(&self, c: i64) -> Shift {
        Shift(self.0.iter().map(|&s| s + c).collect())
    }

    /// The shift `-delta`.
    pub fn negated_degrees(delta: &[usize]) -> Shift {
        Shift(delta.iter().map(|&d| -(d as i64)).collect())
    }

    pub fn min(&self) -> Option<i64> {
        self.0.iter().copied().min()
    }

    pub fn max(&self) -> Option<i64> {
        self.0.iter().copied().max()
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl std::ops::Index<usize> for Shift {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl From<Vec<i64>> for Shift {
    fn from(v: Vec<i64>) -> Self {
        Shift(v)
    }
}

/// Pivot of a nonzero row: 0-based column index and the degree of the entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PivotProfile {
    pub index: usize,
    pub degree: usize,
}

/// `max_j (deg row[j] + s[j])`, or `None` for a zero row.
pub fn shifted_degree(row: &[Poly], s: &Shift) -> Option<i64> {
    row.iter()
        .zip(s.entries())
        .filter_map(|(p, &sj)| p.degree().map(|d| d as i64 + sj))
        .max()
}

/// The s-pivot of a row; the largest index achieving the s-degree wins.
pub fn pivot_profile(row: &[Poly], s: &Shift) -> Result<PivotProfile> {
    if row.len() != s.len() {
        return Err(Error::DimensionMismatch(format!(
            "row of length {} with shift of length {}",
            row.len(),
            s.len()
        )));
    }
    let d = shifted_degree(row, s).ok_or(Error::ZeroRow)?;
    let index = (0..row.len())
        .rev()
        .find(|&j| row[j].degree().map(|dj| dj as i64 + s[j]) == Some(d))
        .expect("s-degree is attained");
    Ok(PivotProfile { index, degree: row[index].degree().expect("nonzero pivot") })
}

/// Matrix of polynomials, row-major, with at least one row and one column.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMat {
    modulus: Modulus,
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl PolyMat {
    pub fn zeros(modulus: Modulus, rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "PolyMat dimensions must be positive");
        PolyMat { modulus, rows, cols, entries: vec![Poly::zero(modulus); rows * cols] }
    }

    pub fn identity(modulus: Modulus, n: usize) -> Self {
        let mut m = Self::zeros(modulus, n, n);
        for i in 0..n {
            m.set(i, i, Poly::one(modulus));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::DimensionMismatch("empty polynomial matrix".into()));
        }
        let modulus = rows[0][0].modulus();
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            for p in row {
                if p.modulus() != modulus {
                    return Err(Error::FieldMismatch(modulus.p(), p.modulus().p()));
                }
                entries.push(p);
            }
        }
        Ok(PolyMat { modulus, rows: r, cols: c, entries })
    }

    /// Convenience constructor from signed coefficient lists.
    pub fn from_i64(modulus: Modulus, rows: &[Vec<Vec<i64>>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|c| Poly::from_i64(modulus, c)).collect())
                .collect(),
        )
    }

    /// Embeds a constant matrix.
    pub fn from_constant(c: &Matrix) -> Self {
        let mut m = Self::zeros(c.modulus(), c.rows(), c.cols());
        for i in 0..c.rows() {
            for j in 0..c.cols() {
                m.set(i, j, Poly::constant(c.modulus(), c.get(i, j)));
            }
        }
        m
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
    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Poly {
        &mut self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        assert_eq!(p.modulus(), self.modulus);
        self.entries[i * self.cols + j] = p;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Poly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [Poly] {
        &mut self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Poly>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn select_rows(&self, idx: &[usize]) -> PolyMat {
        let rows = idx.iter().map(|&i| self.row(i).to_vec()).collect();
        PolyMat::from_rows(rows).expect("nonempty selection")
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        self.row(i).iter().all(Poly::is_zero)
    }

    /// Number of field elements stored (sum of `deg + 1` over nonzero entries).
    pub fn coefficient_count(&self) -> usize {
        self.entries.iter().map(Poly::len).sum()
    }

    /// Degrees of all entries, `None` for zeros.
    pub fn degree_profile(&self) -> Vec<Vec<Option<usize>>> {
        (0..self.rows).map(|i| self.row(i).iter().map(Poly::degree).collect()).collect()
    }

    /// Largest entry degree.
    pub fn degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(Poly::degree).max()
    }

    /// Per-column maximum degree, `None` for zero columns.
    pub fn column_degree(&self) -> Vec<Option<usize>> {
        (0..self.cols)
            .map(|j| (0..self.rows).filter_map(|i| self.get(i, j).degree()).max())
            .collect()
    }

    pub fn matmul(&self, other: &PolyMat) -> Result<PolyMat> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.modulus != other.modulus {
            return Err(Error::FieldMismatch(self.modulus.p(), other.modulus.p()));
        }
        let mut out = PolyMat::zeros(self.modulus, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a * b;
                    out.get_mut(i, j).add_assign_ref(&prod);
                }
            }
        }
        Ok(out)
    }

    fn check_shift(&self, s: &Shift) -> Result<()> {
        if s.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "shift of length {} for {} columns",
                s.len(),
                self.cols
            )));
        }
        Ok(())
    }

    pub fn shifted_row_degree(&self, s: &Shift) -> Result<Vec<i64>> {
        self.check_shift(s)?;
        (0..self.rows).map(|i| shifted_degree(self.row(i), s).ok_or(Error::ZeroRow)).collect()
    }

    /// Entry `(i, j)` is the coefficient of degree `d_i - s_j` of entry
    /// `(i, j)`, where `d` is the s-row degree.
    pub fn shifted_leading_matrix(&self, s: &Shift) -> Result<Matrix> {
        let d = self.shifted_row_degree(s)?;
        Ok(Matrix::from_fn(self.modulus, self.rows, self.cols, |i, j| {
            let e = d[i] - s[j];
            if e < 0 {
                0
            } else {
                self.get(i, j).coeff(e as usize)
            }
        }))
    }

    pub fn pivot_profiles(&self, s: &Shift) -> Result<Vec<PivotProfile>> {
        self.check_shift(s)?;
        (0..self.rows).map(|i| pivot_profile(self.row(i), s)).collect()
    }

    /// True iff the s-leading matrix has full row rank.
    pub fn is_reduced(&self, s: &Shift) -> bool {
        match self.shifted_leading_matrix(s) {
            Ok(lm) => lm.rank() == self.rows,
            Err(_) => false,
        }
    }

    /// Pairwise distinct s-pivot indices; with `diagonal`, row `i` must pivot
    /// at column `i`.
    pub fn is_weak_popov(&self, s: &Shift, diagonal: bool) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let Ok(piv) = self.pivot_profiles(s) else {
            return false;
        };
        if diagonal {
            return piv.iter().enumerate().all(|(i, p)| p.index == i);
        }
        let mut seen = vec![false; self.cols];
        piv.iter().all(|p| !std::mem::replace(&mut seen[p.index], true))
    }

    /// s-pivot entries monic and on the diagonal, and each column's
    /// nonpivot entries of degree strictly below the pivot entry.
    pub fn is_popov(&self, s: &Shift) -> bool {
        if !self.is_weak_popov(s, true) {
            return false;
        }
        (0..self.cols).all(|j| {
            let pivot = self.get(j, j);
            pivot.is_monic()
                && (0..self.rows).all(|i| i == j || self.get(i, j).degree() < pivot.degree())
        })
    }

    /// The s-pivot degree of a matrix in s-weak Popov form, indexed by pivot
    /// column.
    pub fn pivot_degree(&self, s: &Shift) -> Result<Vec<usize>> {
        let piv = self.pivot_profiles(s)?;
        let mut delta = vec![None; self.cols];
        for p in &piv {
            if delta[p.index].replace(p.degree).is_some() {
                return Err(Error::NotWeakPopov);
            }
        }
        delta.into_iter().map(|d| d.ok_or(Error::NotWeakPopov)).collect()
    }

    /// Reorders rows so that row `j` has s-pivot index `j`.
    pub fn to_diagonal_weak_popov(&self, s: &Shift) -> Result<PolyMat> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("weak Popov form needs a square matrix".into()));
        }
        let piv = self.pivot_profiles(s).map_err(|e| match e {
            Error::ZeroRow => Error::Singular,
            e => e,
        })?;
        let mut order = vec![usize::MAX; self.cols];
        for (i, p) in piv.iter().enumerate() {
            if order[p.index] != usize::MAX {
                return Err(Error::NotWeakPopov);
            }
            order[p.index] = i;
        }
        Ok(self.select_rows(&order))
    }

    /// Mulders-Storjohann reduction to s-weak Popov form by simple
    /// transformations. Requires full row rank.
    pub fn weak_popov_form(&self, s: &Shift) -> Result<PolyMat> {
        self.check_shift(s)?;
        let f = self.modulus;
        let mut rows = self.to_rows();
        let mut owner: Vec<Option<usize>> = vec![None; self.cols];
        let mut queue: Vec<usize> = (0..self.rows).rev().collect();
        while let Some(mut r) = queue.pop() {
            loop {
                let pr = pivot_profile(&rows[r], s).map_err(|_| Error::Singular)?;
                let Some(q) = owner[pr.index] else {
                    owner[pr.index] = Some(r);
                    break;
                };
                let pq = pivot_profile(&rows[q], s).expect("owner row is nonzero");
                // reduce the one with the larger pivot degree by the other
                let (big, small, pb, ps) =
                    if pr.degree >= pq.degree { (r, q, pr, pq) } else { (q, r, pq, pr) };
                let lb = rows[big][pb.index].leading_coeff().expect("pivot");
                let ls = rows[small][ps.index].leading_coeff().expect("pivot");
                let c = f.neg(f.mul(lb, f.inv(ls).expect("nonzero")));
                let k = pb.degree - ps.degree;
                let small_row = rows[small].clone();
                for (a, b) in rows[big].iter_mut().zip(&small_row) {
                    a.add_scaled_shifted(c, k, b);
                }
                if big == q {
                    owner[pr.index] = Some(r);
                    r = q;
                }
            }
        }
        PolyMat::from_rows(rows)
    }

    /// Normalizes a nonsingular s-weak Popov matrix to the s-Popov form of
    /// its row space.
    ///
    /// With `delta` the s-pivot degree, the Popov form is also `(-delta)`-Popov
    /// with zero row degree. We therefore reduce to `(-delta)`-weak Popov form
    /// and left-multiply by the inverse of the `(-delta)`-leading matrix.
    pub fn weak_popov_to_popov(&self, s: &Shift) -> Result<PolyMat> {
        let w = self.to_diagonal_weak_popov(s)?;
        let delta = w.pivot_degree(s)?;
        let t = Shift::negated_degrees(&delta);
        let r = w.weak_popov_form(&t)?;
        let lm = r.shifted_leading_matrix(&t)?;
        let inv = lm.inverse()?;
        let p = left_mul_constant_linearized(&inv, &r)?;
        debug_assert!(p.is_popov(s), "normalization left Popov form");
        Ok(p)
    }

    /// The s-Popov form of any nonsingular matrix.
    pub fn popov_form(&self, s: &Shift) -> Result<PolyMat> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("Popov form needs a square matrix".into()));
        }
        self.weak_popov_form(s)?.weak_popov_to_popov(s)
    }

    /// Determinant by fraction-free (Bareiss) elimination over K[X].
    pub fn determinant(&self) -> Result<Poly> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        let f = self.modulus;
        let mut a = self.to_rows();
        let mut prev = Poly::one(f);
        let mut negate = false;
        for k in 0..n {
            if a[k][k].is_zero() {
                let Some(i) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return Ok(Poly::zero(f));
                };
                a.swap(i, k);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                    let (q, r) = num.divrem(&prev)?;
                    debug_assert!(r.is_zero(), "Bareiss division is exact");
                    a[i][j] = q;
                }
                a[i][k] = Poly::zero(f);
            }
            prev = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        Ok(if negate { -&det } else { det })
    }
}

impl fmt::Debug for PolyMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// `C * R` for a constant matrix `C`, entry by entry.
pub fn left_mul_constant(c: &Matrix, r: &PolyMat) -> Result<PolyMat> {
    if c.cols() != r.rows() {
        return Err(Error::DimensionMismatch("constant times polynomial matrix".into()));
    }
    let f = r.modulus();
    let mut out = PolyMat::zeros(f, c.rows(), r.cols());
    for i in 0..c.rows() {
        for k in 0..c.cols() {
            let a = c.get(i, k);
            if a == 0 {
                continue;
            }
            for j in 0..r.cols() {
                out.get_mut(i, j).add_scaled_shifted(a, 0, r.get(k, j));
            }
        }
    }
    Ok(out)
}

/// `C * R` computed on the column linearization of `R`: column `j` of
/// degree `d_j` becomes `d_j + 1` constant columns, the constant product is
/// formed once, and the result is folded back.
pub fn left_mul_constant_linearized(c: &Matrix, r: &PolyMat) -> Result<PolyMat> {
    if c.cols() != r.rows() {
        return Err(Error::DimensionMismatch("constant times polynomial matrix".into()));
    }
    let f = r.modulus();
    let widths: Vec<usize> = r.column_degree().iter().map(|d| d.map_or(0, |d| d + 1)).collect();
    let mut offsets = Vec::with_capacity(widths.len());
    let mut total = 0;
    for &w in &widths {
        offsets.push(total);
        total += w;
    }
    let lin = Matrix::from_fn(f, r.rows(), total, |i, col| {
        // locate the polynomial column owning `col`
        let j = offsets.partition_point(|&o| o <= col) - 1;
        r.get(i, j).coeff(col - offsets[j])
    });
    let prod = c.mul(&lin)?;
    let mut out = PolyMat::zeros(f, c.rows(), r.cols());
    for i in 0..c.rows() {
        for j in 0..r.cols() {
            let coeffs: Vec<FieldElement> =
                prod.row(i)[offsets[j]..offsets[j] + widths[j]].to_vec();
            out.set(i, j, Poly::from_residues(f, coeffs).expect("canonical"));
        }
    }
    Ok(out)
}
