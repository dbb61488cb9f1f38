//! The multiplication module: Jordan matrices in standard representation and
//! the action `p . e = e * p(J)` on row vectors.
//!
//! A block with eigenvalue `x` and size `n` is upper bidiagonal (eigenvalue
//! on the diagonal, ones above it). The `n` columns of the block hold the
//! coefficients, low degree first, of `f` in `K[X]/(X^n)`, and `p` acts on
//! it as `p(X + x) * f mod X^n`.

use crate::error::{Error, Result};
use crate::field::{FieldElement, Modulus};
use crate::linalg::Matrix;
use crate::poly::Poly;
use crate::polymat::PolyMat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct JordanBlock {
    pub eigenvalue: FieldElement,
    pub size: usize,
}

/// All blocks sharing one eigenvalue.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EigenGroup {
    pub eigenvalue: FieldElement,
    pub sizes: Vec<usize>,
}

/// A Jordan matrix in standard representation: distinct eigenvalues per
/// group, sizes non-increasing inside a group, groups ordered by
/// non-increasing number of blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JordanSpec {
    modulus: Modulus,
    groups: Vec<EigenGroup>,
    blocks: Vec<JordanBlock>,
    offsets: Vec<usize>,
    sigma: usize,
}

impl JordanSpec {
    /// Validates groups that are already in standard representation.
    pub fn from_groups(modulus: Modulus, groups: Vec<EigenGroup>) -> Result<Self> {
        for (k, g) in groups.iter().enumerate() {
            modulus.check(g.eigenvalue)?;
            if g.sizes.is_empty() {
                return Err(Error::InvalidJordan(format!("group {k} has no blocks")));
            }
            if g.sizes.contains(&0) {
                return Err(Error::InvalidJordan("block sizes must be positive".into()));
            }
            if g.sizes.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::InvalidJordan(format!("sizes of group {k} increase")));
            }
            if groups[..k].iter().any(|h| h.eigenvalue == g.eigenvalue) {
                return Err(Error::InvalidJordan(format!(
                    "eigenvalue {} appears in two groups",
                    g.eigenvalue
                )));
            }
        }
        if groups.windows(2).any(|w| w[0].sizes.len() < w[1].sizes.len()) {
            return Err(Error::InvalidJordan("group lengths increase".into()));
        }
        let blocks: Vec<JordanBlock> = groups
            .iter()
            .flat_map(|g| g.sizes.iter().map(|&size| JordanBlock { eigenvalue: g.eigenvalue, size }))
            .collect();
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut sigma = 0;
        for b in &blocks {
            offsets.push(sigma);
            sigma += b.size;
        }
        Ok(JordanSpec { modulus, groups, blocks, offsets, sigma })
    }

    /// The empty matrix (`sigma = 0`).
    pub fn empty(modulus: Modulus) -> Self {
        JordanSpec { modulus, groups: Vec::new(), blocks: Vec::new(), offsets: Vec::new(), sigma: 0 }
    }

    /// Nilpotent blocks of the given sizes, in any order.
    pub fn nilpotent(modulus: Modulus, sizes: &[usize]) -> Result<(Self, Vec<usize>)> {
        let blocks: Vec<JordanBlock> =
            sizes.iter().map(|&size| JordanBlock { eigenvalue: 0, size }).collect();
        let (spec, perm) = Self::standard_order(modulus, &blocks)?;
        Ok((spec, perm))
    }

    /// Sorts arbitrary blocks into standard representation. Returns the
    /// specification and, for each new block, the index of the input block
    /// it came from.
    pub fn standard_order(modulus: Modulus, blocks: &[JordanBlock]) -> Result<(Self, Vec<usize>)> {
        if blocks.iter().any(|b| b.size == 0) {
            return Err(Error::InvalidJordan("block sizes must be positive".into()));
        }
        let mut groups: Vec<(FieldElement, Vec<usize>)> = Vec::new();
        for (i, b) in blocks.iter().enumerate() {
            modulus.check(b.eigenvalue)?;
            match groups.iter_mut().find(|g| g.0 == b.eigenvalue) {
                Some(g) => g.1.push(i),
                None => groups.push((b.eigenvalue, vec![i])),
            }
        }
        for g in &mut groups {
            g.1.sort_by(|&a, &b| blocks[b].size.cmp(&blocks[a].size));
        }
        groups.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then(a.0.cmp(&b.0)));
        let perm: Vec<usize> = groups.iter().flat_map(|g| g.1.iter().copied()).collect();
        let spec = Self::from_groups(
            modulus,
            groups
                .into_iter()
                .map(|(eigenvalue, idx)| EigenGroup {
                    eigenvalue,
                    sizes: idx.iter().map(|&i| blocks[i].size).collect(),
                })
                .collect(),
        )?;
        Ok((spec, perm))
    }

    /// Standard representation of `blocks` together with `e`, whose column
    /// blocks are permuted alongside.
    pub fn standardize(
        modulus: Modulus,
        blocks: &[JordanBlock],
        e: &Matrix,
    ) -> Result<(Self, Matrix)> {
        let total: usize = blocks.iter().map(|b| b.size).sum();
        if e.cols() != total {
            return Err(Error::DimensionMismatch(format!(
                "E has {} columns, blocks sum to {total}",
                e.cols()
            )));
        }
        let (spec, perm) = Self::standard_order(modulus, blocks)?;
        let mut old_offsets = Vec::with_capacity(blocks.len());
        let mut acc = 0;
        for b in blocks {
            old_offsets.push(acc);
            acc += b.size;
        }
        let mut cols = Vec::with_capacity(total);
        for &i in &perm {
            cols.extend(old_offsets[i]..old_offsets[i] + blocks[i].size);
        }
        let permuted = Matrix::from_fn(modulus, e.rows(), total, |r, c| e.get(r, cols[c]));
        Ok((spec, permuted))
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn groups(&self) -> &[EigenGroup] {
        &self.groups
    }

    pub fn blocks(&self) -> &[JordanBlock] {
        &self.blocks
    }

    /// First column of each block.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    #[inline]
    pub fn sigma(&self) -> usize {
        self.sigma
    }

    /// Splits into the leading `at` columns and the rest. A block straddling
    /// the cut contributes its leading part to the first list and its
    /// trailing part to the second. Block order is kept, so the lists are
    /// generally not standard.
    pub fn split_blocks(&self, at: usize) -> (Vec<JordanBlock>, Vec<JordanBlock>) {
        assert!(at <= self.sigma);
        let mut lead = Vec::new();
        let mut trail = Vec::new();
        for (b, &off) in self.blocks.iter().zip(&self.offsets) {
            if off + b.size <= at {
                lead.push(*b);
            } else if off >= at {
                trail.push(*b);
            } else {
                lead.push(JordanBlock { size: at - off, ..*b });
                trail.push(JordanBlock { size: off + b.size - at, ..*b });
            }
        }
        (lead, trail)
    }

    fn check_module_mat(&self, e: &Matrix) -> Result<()> {
        if e.cols() != self.sigma {
            return Err(Error::DimensionMismatch(format!(
                "module matrix has {} columns, expected {}",
                e.cols(),
                self.sigma
            )));
        }
        if e.modulus() != self.modulus {
            return Err(Error::FieldMismatch(self.modulus.p(), e.modulus().p()));
        }
        Ok(())
    }

    /// `e * p(J)` for every row `e` of `e_mat`.
    pub fn apply_poly(&self, p: &Poly, e_mat: &Matrix) -> Result<Matrix> {
        self.check_module_mat(e_mat)?;
        let f = self.modulus;
        let mut out = Matrix::zeros(f, e_mat.rows(), self.sigma);
        for (b, &off) in self.blocks.iter().zip(&self.offsets) {
            let shifted = p.taylor_shift_trunc(b.eigenvalue, b.size);
            for i in 0..e_mat.rows() {
                let block = block_poly(e_mat, i, off, b.size);
                let prod = shifted.mul_trunc(&block, b.size);
                write_block(&mut out, i, off, &prod);
            }
        }
        Ok(out)
    }

    /// `P * E` under the action, evaluated entry by entry.
    pub fn residual_direct(&self, p: &PolyMat, e_mat: &Matrix) -> Result<Matrix> {
        self.check_module_mat(e_mat)?;
        if p.cols() != e_mat.rows() {
            return Err(Error::DimensionMismatch(format!(
                "{} columns against {} module rows",
                p.cols(),
                e_mat.rows()
            )));
        }
        let f = self.modulus;
        let mut out = Matrix::zeros(f, p.rows(), self.sigma);
        for (b, &off) in self.blocks.iter().zip(&self.offsets) {
            let rows: Vec<Poly> = (0..e_mat.rows()).map(|j| block_poly(e_mat, j, off, b.size)).collect();
            for i in 0..p.rows() {
                let mut acc = Poly::zero(f);
                for (j, row) in rows.iter().enumerate() {
                    let shifted = p.get(i, j).taylor_shift_trunc(b.eigenvalue, b.size);
                    acc.add_assign_ref(&shifted.mul_trunc(row, b.size));
                }
                write_block(&mut out, i, off, &acc.truncate(b.size));
            }
        }
        Ok(out)
    }

    /// `P * E` under the action, with the columns of `P` cut into chunks of
    /// degree below `ceil(sigma / m)`. The chunked module rows
    /// `X^(k * chunk) . E_j` are formed once and shared by every row of `P`.
    pub fn residual(&self, p: &PolyMat, e_mat: &Matrix) -> Result<Matrix> {
        self.check_module_mat(e_mat)?;
        let m = e_mat.rows();
        if p.cols() != m {
            return Err(Error::DimensionMismatch(format!(
                "{} columns against {m} module rows",
                p.cols()
            )));
        }
        if self.sigma < m || self.sigma == 0 {
            return self.residual_direct(p, e_mat);
        }
        let f = self.modulus;
        let chunk = self.sigma.div_ceil(m);
        let counts: Vec<usize> =
            p.column_degree().iter().map(|d| d.map_or(0, |d| d / chunk + 1)).collect();
        let mut out = Matrix::zeros(f, p.rows(), self.sigma);
        for (b, &off) in self.blocks.iter().zip(&self.offsets) {
            let step = Poly::monomial(f, 1, chunk).taylor_shift_trunc(b.eigenvalue, b.size);
            let mut acc: Vec<Poly> = vec![Poly::zero(f); p.rows()];
            for j in 0..m {
                let mut expanded = block_poly(e_mat, j, off, b.size);
                for k in 0..counts[j] {
                    if k > 0 {
                        expanded = step.mul_trunc(&expanded, b.size);
                    }
                    if expanded.is_zero() {
                        break;
                    }
                    for (i, a) in acc.iter_mut().enumerate() {
                        let piece = chunk_of(p.get(i, j), k, chunk);
                        if piece.is_zero() {
                            continue;
                        }
                        let shifted = piece.taylor_shift_trunc(b.eigenvalue, b.size);
                        a.add_assign_ref(&shifted.mul_trunc(&expanded, b.size));
                    }
                }
            }
            for (i, a) in acc.iter().enumerate() {
                write_block(&mut out, i, off, a);
            }
        }
        Ok(out)
    }
}

/// Coefficients `k * len .. (k + 1) * len` of `p`, as a polynomial.
fn chunk_of(p: &Poly, k: usize, len: usize) -> Poly {
    let c = p.coeffs();
    let lo = (k * len).min(c.len());
    let hi = ((k + 1) * len).min(c.len());
    Poly::from_coeffs(p.modulus(), c[lo..hi].to_vec())
}

pub(crate) fn block_poly(e: &Matrix, row: usize, off: usize, size: usize) -> Poly {
    Poly::from_coeffs(e.modulus(), e.row(row)[off..off + size].to_vec())
}

fn write_block(out: &mut Matrix, row: usize, off: usize, p: &Poly) {
    let r = out.row_mut(row);
    for (k, v) in r[off..].iter_mut().enumerate().take(p.coeffs().len()) {
        *v = p.coeffs()[k];
    }
}
