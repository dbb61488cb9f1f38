//! Interpolation instances and the reference engines: the iterative
//! constraint-by-constraint algorithm, a plain divide-and-conquer minimal
//! basis routine built on it, and a linear-algebra kernel oracle.

use crate::error::{Error, Result};
use crate::field::{FieldElement, Modulus};
use crate::jordan::JordanSpec;
use crate::linalg::Matrix;
use crate::poly::Poly;
use crate::polymat::{PolyMat, Shift};

/// Input of the minimal interpolation problem: a module matrix `E` with
/// `m` rows, the Jordan matrix `J` acting on it, and a shift of length `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpInstance {
    e: Matrix,
    jordan: JordanSpec,
    shift: Shift,
}

impl InterpInstance {
    pub fn new(e: Matrix, jordan: JordanSpec, shift: Shift) -> Result<Self> {
        if e.rows() == 0 {
            return Err(Error::DimensionMismatch("instance needs at least one row".into()));
        }
        if e.cols() != jordan.sigma() {
            return Err(Error::DimensionMismatch(format!(
                "E has {} columns, J has dimension {}",
                e.cols(),
                jordan.sigma()
            )));
        }
        if e.modulus() != jordan.modulus() {
            return Err(Error::FieldMismatch(e.modulus().p(), jordan.modulus().p()));
        }
        if shift.len() != e.rows() {
            return Err(Error::DimensionMismatch(format!(
                "shift of length {} for {} rows",
                shift.len(),
                e.rows()
            )));
        }
        Ok(InterpInstance { e, jordan, shift })
    }

    #[inline]
    pub fn e(&self) -> &Matrix {
        &self.e
    }

    #[inline]
    pub fn jordan(&self) -> &JordanSpec {
        &self.jordan
    }

    #[inline]
    pub fn shift(&self) -> &Shift {
        &self.shift
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.e.rows()
    }

    #[inline]
    pub fn sigma(&self) -> usize {
        self.jordan.sigma()
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.e.modulus()
    }

    pub fn with_shift(&self, shift: Shift) -> Result<Self> {
        Self::new(self.e.clone(), self.jordan.clone(), shift)
    }
}

/// Diagonal degrees of the shifted Popov interpolation basis (equivalently
/// the pivot degree of any shifted weak Popov basis).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MinimalDegree(Vec<usize>);

impl MinimalDegree {
    pub fn new(degrees: Vec<usize>) -> Self {
        MinimalDegree(degrees)
    }

    pub fn zeros(m: usize) -> Self {
        MinimalDegree(vec![0; m])
    }

    #[inline]
    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<usize> {
        self.0
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn plus(&self, other: &MinimalDegree) -> MinimalDegree {
        assert_eq!(self.len(), other.len());
        MinimalDegree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// True iff every row of `p` is an interpolant, i.e. `p * E = 0`.
pub fn interpolant_check(p: &PolyMat, inst: &InterpInstance) -> Result<bool> {
    Ok(inst.jordan.residual(p, &inst.e)?.is_zero())
}

/// The iterative engine, processing blocks left to right. Returns an
/// s-diagonal weak Popov interpolation basis and its pivot degree.
pub fn iterative_weak_popov(inst: &InterpInstance) -> (PolyMat, MinimalDegree) {
    let order: Vec<usize> = (0..inst.jordan.blocks().len()).collect();
    iterative_weak_popov_with_order(inst, &order)
}

/// Same as [`iterative_weak_popov`], visiting Jordan blocks in `block_order`
/// (a permutation of the block indices). Inside a block, constraints are
/// always taken by increasing precision.
pub fn iterative_weak_popov_with_order(
    inst: &InterpInstance,
    block_order: &[usize],
) -> (PolyMat, MinimalDegree) {
    let f = inst.modulus();
    let m = inst.m();
    let blocks = inst.jordan.blocks();
    let offsets = inst.jordan.offsets();
    assert_eq!(block_order.len(), blocks.len(), "block order must be a permutation");
    let s = inst.shift.entries();

    let mut basis: Vec<Vec<Poly>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { Poly::one(f) } else { Poly::zero(f) }).collect())
        .collect();
    let mut res: Vec<Vec<FieldElement>> = (0..m).map(|i| inst.e.row(i).to_vec()).collect();
    let mut delta = vec![0usize; m];
    let mut done = vec![false; blocks.len()];

    for &b in block_order {
        let block = blocks[b];
        let off = offsets[b];
        for k in 0..block.size {
            let col = off + k;
            // among rows with a nonzero discrepancy, the smallest s-degree,
            // then the smallest index, keeps pivots on the diagonal
            let Some(sel) = (0..m)
                .filter(|&i| res[i][col] != 0)
                .min_by_key(|&i| (s[i] + delta[i] as i64, i))
            else {
                continue;
            };
            let inv = f.inv(res[sel][col]).expect("nonzero discrepancy");
            let (sel_poly, sel_res) = (basis[sel].clone(), res[sel].clone());
            for i in 0..m {
                let d = res[i][col];
                if i == sel || d == 0 {
                    continue;
                }
                let c = f.neg(f.mul(d, inv));
                for (a, b) in basis[i].iter_mut().zip(&sel_poly) {
                    a.add_scaled_shifted(c, 0, b);
                }
                for (a, &b) in res[i].iter_mut().zip(&sel_res) {
                    *a = f.mul_add(c, b, *a);
                }
            }
            let lin = Poly::linear(f, block.eigenvalue);
            for p in basis[sel].iter_mut() {
                *p = &*p * &lin;
            }
            multiply_residual_by_linear(&mut res[sel], inst.jordan(), &done, b, block.eigenvalue, f);
            delta[sel] += 1;
        }
        done[b] = true;
    }
    let p = PolyMat::from_rows(basis).expect("square basis");
    (p, MinimalDegree(delta))
}

/// Residual update for multiplying a basis row by `X - x`. On a block with
/// eigenvalue `y` this is the action of `X + (y - x)`.
fn multiply_residual_by_linear(
    row: &mut [FieldElement],
    jordan: &JordanSpec,
    done: &[bool],
    current: usize,
    x: FieldElement,
    f: Modulus,
) {
    for (b, (block, &off)) in jordan.blocks().iter().zip(jordan.offsets()).enumerate() {
        if done[b] && b != current {
            continue;
        }
        let c = f.sub(block.eigenvalue, x);
        let seg = &mut row[off..off + block.size];
        for k in (0..block.size).rev() {
            let below = if k > 0 { seg[k - 1] } else { 0 };
            seg[k] = f.mul_add(c, seg[k], below);
        }
    }
}

/// The s-Popov interpolation basis by the iterative engine and its minimal
/// degree.
pub fn iterative_mib(inst: &InterpInstance) -> (PolyMat, MinimalDegree) {
    let (w, delta) = iterative_weak_popov(inst);
    let p = w.weak_popov_to_popov(inst.shift()).expect("iterative output is nonsingular weak Popov");
    (p, delta)
}

/// Base-case solver; shares the contract of [`iterative_mib`], which it
/// currently calls.
pub fn linear_algebra_mib(inst: &InterpInstance) -> (PolyMat, MinimalDegree) {
    iterative_mib(inst)
}

/// An s-diagonal weak Popov interpolation basis by divide and conquer on
/// the constraints, with the iterative engine for `sigma <= m`.
pub fn minimal_interpolation_basis(inst: &InterpInstance) -> Result<(PolyMat, MinimalDegree)> {
    minimal_interpolation_basis_with_threshold(inst, inst.m())
}

/// As [`minimal_interpolation_basis`], switching to the iterative engine
/// once `sigma <= max(m, threshold)`.
pub fn minimal_interpolation_basis_with_threshold(
    inst: &InterpInstance,
    threshold: usize,
) -> Result<(PolyMat, MinimalDegree)> {
    let sigma = inst.sigma();
    if sigma <= inst.m().max(threshold) {
        return Ok(iterative_weak_popov(inst));
    }
    let (first, second) = split_instance(inst)?;
    let (p1, d1) = minimal_interpolation_basis_with_threshold(&first, threshold)?;
    let rest = second.finish(&p1, &d1)?;
    let (p2, d2) = minimal_interpolation_basis_with_threshold(&rest, threshold)?;
    Ok((p2.matmul(&p1)?, d1.plus(&d2)))
}

/// The trailing half of a split, waiting for the first basis to compute its
/// module matrix.
pub(crate) struct PendingHalf<'a> {
    parent: &'a InterpInstance,
    at: usize,
    trail: Vec<crate::jordan::JordanBlock>,
}

impl PendingHalf<'_> {
    /// The instance for the remaining constraints: the trailing columns of
    /// `P1 * E`, with shift `s + delta1`.
    pub(crate) fn finish(&self, p1: &PolyMat, d1: &MinimalDegree) -> Result<InterpInstance> {
        let inst = self.parent;
        let res = inst.jordan().residual(p1, inst.e())?;
        let tail = res.columns(self.at..inst.sigma());
        let (j2, e2) = JordanSpec::standardize(inst.modulus(), &self.trail, &tail)?;
        InterpInstance::new(e2, j2, inst.shift().plus_degrees(d1.entries()))
    }
}

/// Splits the constraints at `ceil(sigma / 2)`.
pub(crate) fn split_instance(inst: &InterpInstance) -> Result<(InterpInstance, PendingHalf<'_>)> {
    let at = inst.sigma().div_ceil(2);
    let (lead, trail) = inst.jordan().split_blocks(at);
    let (j1, e1) = JordanSpec::standardize(inst.modulus(), &lead, &inst.e().columns(0..at))?;
    let first = InterpInstance::new(e1, j1, inst.shift().clone())?;
    Ok((first, PendingHalf { parent: inst, at, trail }))
}

/// A basis of the K-space of interpolants of s-degree at most `bound`.
///
/// Uses its own evaluation of the action (repeated right multiplication by
/// the Jordan matrix) and Gaussian elimination, so it shares no code with
/// the engines above.
pub fn kernel_oracle(inst: &InterpInstance, bound: i64) -> Vec<Vec<Poly>> {
    let f = inst.modulus();
    let m = inst.m();
    let s = inst.shift().entries();
    let mut unknowns: Vec<(usize, usize)> = Vec::new();
    let mut rows: Vec<Vec<FieldElement>> = Vec::new();
    for j in 0..m {
        if bound < s[j] {
            continue;
        }
        let mut v = inst.e().row(j).to_vec();
        for k in 0..=(bound - s[j]) as usize {
            if k > 0 {
                v = times_jordan(&v, inst.jordan(), f);
            }
            unknowns.push((j, k));
            rows.push(v.clone());
        }
    }
    if rows.is_empty() {
        return Vec::new();
    }
    let a = Matrix::from_rows(f, &rows).expect("canonical residues");
    a.left_kernel()
        .into_iter()
        .map(|y| {
            let mut coeffs = vec![Vec::new(); m];
            for (&(j, k), &c) in unknowns.iter().zip(&y) {
                if coeffs[j].len() <= k {
                    coeffs[j].resize(k + 1, 0);
                }
                coeffs[j][k] = c;
            }
            coeffs.into_iter().map(|c| Poly::from_coeffs(f, c)).collect()
        })
        .collect()
}

/// `v * J` with `J` upper bidiagonal.
fn times_jordan(v: &[FieldElement], jordan: &JordanSpec, f: Modulus) -> Vec<FieldElement> {
    let mut out = vec![0; v.len()];
    for (b, &off) in jordan.blocks().iter().zip(jordan.offsets()) {
        for k in 0..b.size {
            let prev = if k > 0 { v[off + k - 1] } else { 0 };
            out[off + k] = f.mul_add(b.eigenvalue, v[off + k], prev);
        }
    }
    out
}

/// Expected kernel dimension at degree bound `bound`, given the minimal
/// degree: `sum_i max(0, bound - s_i - delta_i + 1)`.
pub fn expected_kernel_dimension(shift: &Shift, delta: &MinimalDegree, bound: i64) -> usize {
    shift
        .entries()
        .iter()
        .zip(delta.entries())
        .map(|(&s, &d)| (bound - s - d as i64 + 1).max(0) as usize)
        .sum()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::jordan::JordanBlock;
    use crate::random::ShiftKind;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f97() -> Modulus {
        Modulus::new(97).unwrap()
    }

    fn nilpotent_instance(rows: &[Vec<u64>], sizes: &[usize], shift: &[i64]) -> InterpInstance {
        let f = f97();
        let blocks: Vec<JordanBlock> =
            sizes.iter().map(|&size| JordanBlock { eigenvalue: 0, size }).collect();
        let e = Matrix::from_rows(f, rows).unwrap();
        let (j, e) = JordanSpec::standardize(f, &blocks, &e).unwrap();
        InterpInstance::new(e, j, Shift::new(shift.to_vec())).unwrap()
    }

    pub(crate) fn random_instance(rng: &mut impl Rng, f: Modulus, m: usize, sigma: usize) -> InterpInstance {
        let kind = [ShiftKind::Zero, ShiftKind::Hermite, ShiftKind::Uniform][rng.gen_range(0..3)];
        let eigenvalues = rng.gen_range(1..=4);
        crate::random::random_instance(rng, f, m, sigma, eigenvalues, 6, kind)
    }

    fn pm(rows: &[Vec<Vec<i64>>]) -> PolyMat {
        PolyMat::from_i64(f97(), rows).unwrap()
    }

    #[test]
    fn interpolant_check_examples() {
        let inst = nilpotent_instance(&[vec![1]], &[1], &[3]);
        let f = f97();
        assert!(interpolant_check(&PolyMat::zeros(f, 1, 1), &inst).unwrap());
        assert!(interpolant_check(&pm(&[vec![vec![0, 1]]]), &inst).unwrap());
        assert!(!interpolant_check(&pm(&[vec![vec![1]]]), &inst).unwrap());
    }

    #[test]
    fn iterative_examples() {
        let f = f97();
        let zero = InterpInstance::new(
            Matrix::zeros(f, 3, 4),
            JordanSpec::nilpotent(f, &[4]).unwrap().0,
            Shift::zeros(3),
        )
        .unwrap();
        assert_eq!(iterative_mib(&zero), (PolyMat::identity(f, 3), MinimalDegree::zeros(3)));

        let one = nilpotent_instance(&[vec![1], vec![1]], &[1], &[0, 0]);
        let (p, d) = iterative_mib(&one);
        assert_eq!(p, pm(&[vec![vec![0, 1], vec![]], vec![vec![-1], vec![1]]]));
        assert_eq!(d.entries(), &[1, 0]);

        let two = nilpotent_instance(&[vec![1, 0], vec![1, 0]], &[2], &[0, 0]);
        let (p, d) = iterative_mib(&two);
        assert_eq!(p, pm(&[vec![vec![0, 0, 1], vec![]], vec![vec![-1], vec![1]]]));
        assert_eq!(d.entries(), &[2, 0]);
        assert_eq!(linear_algebra_mib(&two), (p, d));
    }

    #[test]
    fn kernel_oracle_examples() {
        let f = f97();
        let zero = InterpInstance::new(
            Matrix::zeros(f, 3, 2),
            JordanSpec::nilpotent(f, &[2]).unwrap().0,
            Shift::new(vec![0, 1, 4]),
        )
        .unwrap();
        assert_eq!(kernel_oracle(&zero, 0).len(), 1);
        let one = nilpotent_instance(&[vec![1], vec![1]], &[1], &[0, 0]);
        let ker = kernel_oracle(&one, 1);
        assert_eq!(ker.len(), 3);
        assert_eq!(expected_kernel_dimension(one.shift(), &MinimalDegree::new(vec![1, 0]), 1), 3);
        for v in ker {
            let row = PolyMat::from_rows(vec![v]).unwrap();
            assert!(interpolant_check(&row, &one).unwrap());
        }
    }

    #[test]
    fn iterative_output_is_certified() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for p in [97, crate::field::NTT_PRIME] {
            let f = Modulus::new(p).unwrap();
            for _ in 0..60 {
                let m = rng.gen_range(1..5);
                let sigma = rng.gen_range(0..14);
                let inst = random_instance(&mut rng, f, m, sigma);
                let (w, dw) = iterative_weak_popov(&inst);
                assert!(w.is_weak_popov(inst.shift(), true));
                assert_eq!(w.pivot_degree(inst.shift()).unwrap(), dw.entries());
                let (pop, d) = iterative_mib(&inst);
                assert!(pop.is_popov(inst.shift()));
                assert!(interpolant_check(&pop, &inst).unwrap());
                assert!(d.sum() <= sigma);
                assert_eq!(pop.determinant().unwrap().degree(), Some(d.sum()));
                let top = sigma as i64 + inst.shift().min().unwrap();
                for bound in inst.shift().min().unwrap()..=top {
                    assert_eq!(
                        kernel_oracle(&inst, bound).len(),
                        expected_kernel_dimension(inst.shift(), &d, bound)
                    );
                }
            }
        }
    }

    #[test]
    fn canonical_under_processing_order() {
        let f = f97();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..60 {
            let m = rng.gen_range(1..5);
            let sigma = rng.gen_range(0..14);
            let inst = random_instance(&mut rng, f, m, sigma);
            let (expect, _) = iterative_mib(&inst);

            let mut order: Vec<usize> = (0..inst.jordan().blocks().len()).collect();
            for i in (1..order.len()).rev() {
                order.swap(i, rng.gen_range(0..=i));
            }
            let (w, _) = iterative_weak_popov_with_order(&inst, &order);
            assert_eq!(w.weak_popov_to_popov(inst.shift()).unwrap(), expect);

            // permute the unknowns, solve, and map back
            let mut perm: Vec<usize> = (0..m).collect();
            for i in (1..m).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            let e = Matrix::from_fn(f, m, sigma, |i, c| inst.e().get(perm[i], c));
            let sh = Shift::new(perm.iter().map(|&i| inst.shift()[i]).collect());
            let permuted = InterpInstance::new(e, inst.jordan().clone(), sh).unwrap();
            let (wp, _) = iterative_weak_popov(&permuted);
            let mut back = PolyMat::zeros(f, m, m);
            for r in 0..m {
                for (c, &orig) in perm.iter().enumerate() {
                    back.set(r, orig, wp.get(r, c).clone());
                }
            }
            assert_eq!(back.popov_form(inst.shift()).unwrap(), expect);
        }
    }

    #[test]
    fn divide_and_conquer_matches_iterative() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for p in [97, crate::field::NTT_PRIME] {
            let f = Modulus::new(p).unwrap();
            for _ in 0..50 {
                let m = rng.gen_range(1..5);
                let sigma = rng.gen_range(0..30);
                let inst = random_instance(&mut rng, f, m, sigma);
                let (pop, d) = iterative_mib(&inst);
                for threshold in [0, 3] {
                    let (w, dw) = minimal_interpolation_basis_with_threshold(&inst, threshold).unwrap();
                    assert!(w.is_weak_popov(inst.shift(), true));
                    assert_eq!(dw, d);
                    assert_eq!(w.pivot_degree(inst.shift()).unwrap(), d.entries());
                    assert_eq!(w.weak_popov_to_popov(inst.shift()).unwrap(), pop);
                }
            }
        }
    }

    #[test]
    fn divide_and_conquer_determinant() {
        let f = f97();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let inst = random_instance(&mut rng, f, 2, 8);
            let (w, d) = minimal_interpolation_basis(&inst).unwrap();
            assert_eq!(w.determinant().unwrap().degree(), Some(d.sum()));
        }
        let zero = InterpInstance::new(
            Matrix::zeros(f, 2, 8),
            JordanSpec::nilpotent(f, &[8]).unwrap().0,
            Shift::zeros(2),
        )
        .unwrap();
        assert_eq!(minimal_interpolation_basis(&zero).unwrap().0, PolyMat::identity(f, 2));
    }
}
