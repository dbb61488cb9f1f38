//! Shifted Popov interpolation bases by divide and conquer.
//!
//! The two recursive calls only serve to find the minimal degree `delta`.
//! Once it is known, the Popov basis comes from a single minimal basis
//! computation on an expanded instance whose shift has small entries, which
//! keeps intermediate matrices of size `O(m * sigma)`.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::mib::{
    linear_algebra_mib, minimal_interpolation_basis, split_instance, InterpInstance, MinimalDegree,
};
use crate::poly::Poly;
use crate::polymat::{left_mul_constant_linearized, PolyMat, Shift};

/// How each column of the Popov basis is cut into pieces of degree below
/// `chunk`: column `i` of degree `delta_i = (alpha_i - 1) * chunk + beta_i`
/// becomes `alpha_i` expanded columns, the last of degree `beta_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionPlan {
    pub chunk: usize,
    pub alpha: Vec<usize>,
    pub beta: Vec<usize>,
    /// Degree bound of every expanded column.
    pub expanded_degree: Vec<usize>,
}

impl ExpansionPlan {
    /// Number of expanded rows.
    pub fn expanded_len(&self) -> usize {
        self.alpha.iter().sum()
    }

    /// `(original row, chunk index)` of each expanded row.
    pub fn origins(&self) -> Vec<(usize, usize)> {
        self.alpha.iter().enumerate().flat_map(|(i, &a)| (0..a).map(move |k| (i, k))).collect()
    }

    /// Index of the last expanded row of each original row.
    pub fn last_rows(&self) -> Vec<usize> {
        self.alpha
            .iter()
            .scan(0, |acc, &a| {
                *acc += a;
                Some(*acc - 1)
            })
            .collect()
    }

    /// The expansion-compression matrix: row `(i, k)` is `X^(k * chunk) e_i`.
    pub fn expansion_matrix(&self, modulus: crate::field::Modulus) -> PolyMat {
        let m = self.alpha.len();
        let mut out = PolyMat::zeros(modulus, self.expanded_len(), m);
        for (r, (i, k)) in self.origins().into_iter().enumerate() {
            out.set(r, i, Poly::monomial(modulus, 1, k * self.chunk));
        }
        out
    }
}

pub fn build_expansion(delta: &MinimalDegree, m: usize, sigma: usize) -> Result<ExpansionPlan> {
    if m == 0 || sigma < m {
        return Err(Error::BaseCaseDoesNotLinearize { sigma, m });
    }
    if delta.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "minimal degree of length {} for m = {m}",
            delta.len()
        )));
    }
    let chunk = sigma.div_ceil(m);
    let alpha: Vec<usize> = delta.entries().iter().map(|&d| d / chunk + 1).collect();
    let beta: Vec<usize> =
        delta.entries().iter().zip(&alpha).map(|(&d, &a)| d - (a - 1) * chunk).collect();
    let expanded_degree = alpha
        .iter()
        .zip(&beta)
        .flat_map(|(&a, &b)| std::iter::repeat_n(chunk, a - 1).chain(std::iter::once(b)))
        .collect();
    Ok(ExpansionPlan { chunk, alpha, beta, expanded_degree })
}

/// Intermediate values of [`known_mindeg_mib`].
#[derive(Clone, Debug)]
pub struct KnownDegreeRun {
    pub plan: ExpansionPlan,
    /// The expanded instance, with its nonnegative shift.
    pub expanded: InterpInstance,
    /// Minimal basis of the expanded instance.
    pub reduced: PolyMat,
    /// Leading matrix of `reduced` under the shift `-expanded_degree`.
    pub leading: Matrix,
    /// `leading^-1 * reduced`.
    pub normalized: PolyMat,
    pub basis: PolyMat,
}

/// The s-Popov interpolation basis, given its minimal degree.
pub fn known_mindeg_mib(inst: &InterpInstance, delta: &MinimalDegree) -> Result<PolyMat> {
    Ok(known_mindeg_mib_detailed(inst, delta)?.basis)
}

pub fn known_mindeg_mib_detailed(
    inst: &InterpInstance,
    delta: &MinimalDegree,
) -> Result<KnownDegreeRun> {
    let f = inst.modulus();
    let m = inst.m();
    let plan = build_expansion(delta, m, inst.sigma())?;
    if delta.sum() > inst.sigma() {
        return Err(Error::InconsistentMinimalDegree);
    }
    let expansion = plan.expansion_matrix(f);
    let e_bar = inst.jordan().residual(&expansion, inst.e())?;
    let neg = Shift::negated_degrees(&plan.expanded_degree);
    let shift = neg.translate(plan.chunk as i64);
    let expanded = InterpInstance::new(e_bar, inst.jordan().clone(), shift)?;
    let (reduced, _) = minimal_interpolation_basis(&expanded)?;

    let leading = reduced.shifted_leading_matrix(&neg)?;
    let inv = leading.inverse().map_err(|_| Error::InconsistentMinimalDegree)?;
    let col_deg = reduced.column_degree();
    if col_deg.iter().zip(&plan.expanded_degree).any(|(d, &b)| d.is_some_and(|d| d > b)) {
        return Err(Error::InconsistentMinimalDegree);
    }
    let normalized = left_mul_constant_linearized(&inv, &reduced)?;
    let basis = normalized.matmul(&expansion)?.select_rows(&plan.last_rows());
    let diag_ok = (0..m).all(|i| basis.get(i, i).degree() == Some(delta.entries()[i]));
    if !diag_ok || !basis.is_popov(inst.shift()) {
        return Err(Error::InconsistentMinimalDegree);
    }
    Ok(KnownDegreeRun { plan, expanded, reduced, leading, normalized, basis })
}

/// One internal split of [`popov_mib`].
#[derive(Clone, Debug)]
pub struct SplitTrace {
    pub shift: Shift,
    pub sigma: usize,
    pub first: PolyMat,
    pub first_degree: MinimalDegree,
    pub second: PolyMat,
    pub second_degree: MinimalDegree,
    pub basis: PolyMat,
    pub degree: MinimalDegree,
}

/// The s-Popov interpolation basis and the s-minimal degree.
pub fn popov_mib(inst: &InterpInstance) -> Result<(PolyMat, MinimalDegree)> {
    popov_rec(inst, &mut None)
}

/// As [`popov_mib`], also returning every internal split, innermost first.
pub fn popov_mib_traced(inst: &InterpInstance) -> Result<(PolyMat, MinimalDegree, Vec<SplitTrace>)> {
    let mut trace = Some(Vec::new());
    let (p, d) = popov_rec(inst, &mut trace)?;
    Ok((p, d, trace.unwrap_or_default()))
}

fn popov_rec(
    inst: &InterpInstance,
    trace: &mut Option<Vec<SplitTrace>>,
) -> Result<(PolyMat, MinimalDegree)> {
    if inst.sigma() <= inst.m() {
        return Ok(linear_algebra_mib(inst));
    }
    let (first, pending) = split_instance(inst)?;
    let (p1, d1) = popov_rec(&first, trace)?;
    let rest = pending.finish(&p1, &d1)?;
    let (p2, d2) = popov_rec(&rest, trace)?;
    let delta = d1.plus(&d2);
    let basis = known_mindeg_mib(inst, &delta)?;
    if let Some(t) = trace {
        t.push(SplitTrace {
            shift: inst.shift().clone(),
            sigma: inst.sigma(),
            first: p1,
            first_degree: d1,
            second: p2,
            second_degree: d2,
            basis: basis.clone(),
            degree: delta.clone(),
        });
    }
    Ok((basis, delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Modulus, NTT_PRIME};
    use crate::jordan::JordanSpec;
    use crate::mib::iterative_mib;
    use crate::mib::tests::random_instance;
    use crate::polymat::left_mul_constant;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f97() -> Modulus {
        Modulus::new(97).unwrap()
    }

    #[test]
    fn expansion_examples() {
        let f = f97();
        let plan = build_expansion(&MinimalDegree::new(vec![3, 1]), 2, 4).unwrap();
        assert_eq!(plan.chunk, 2);
        assert_eq!(plan.alpha, vec![2, 1]);
        assert_eq!(plan.beta, vec![1, 1]);
        assert_eq!(plan.expanded_len(), 3);
        assert_eq!(plan.expanded_degree, vec![2, 1, 1]);
        let expect =
            PolyMat::from_i64(f, &[vec![vec![1], vec![]], vec![vec![0, 0, 1], vec![]], vec![vec![], vec![1]]])
                .unwrap();
        assert_eq!(plan.expansion_matrix(f), expect);

        let plan = build_expansion(&MinimalDegree::zeros(4), 4, 9).unwrap();
        assert_eq!(plan.alpha, vec![1; 4]);
        assert_eq!(plan.expansion_matrix(f), PolyMat::identity(f, 4));

        assert_eq!(
            build_expansion(&MinimalDegree::zeros(3), 3, 2),
            Err(Error::BaseCaseDoesNotLinearize { sigma: 2, m: 3 })
        );
    }

    #[test]
    fn expansion_stays_within_twice_m() {
        for sigma in 2..=64 {
            let plan = build_expansion(&MinimalDegree::new(vec![sigma, 0]), 2, sigma).unwrap();
            assert_eq!(plan.alpha[0], sigma / sigma.div_ceil(2) + 1);
            assert!(plan.expanded_len() <= 4, "sigma = {sigma}");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let m = rng.gen_range(1..8);
            let sigma = rng.gen_range(m..60);
            // random composition of at most sigma
            let mut left = rng.gen_range(0..=sigma);
            let mut d = vec![0; m];
            while left > 0 {
                d[rng.gen_range(0..m)] += 1;
                left -= 1;
            }
            let plan = build_expansion(&MinimalDegree::new(d.clone()), m, sigma).unwrap();
            assert!(plan.expanded_len() <= 2 * m);
            assert!(plan.beta.iter().all(|&b| b < plan.chunk));
            for (i, &di) in d.iter().enumerate() {
                assert_eq!((plan.alpha[i] - 1) * plan.chunk + plan.beta[i], di);
            }
        }
    }

    fn two_block_instance() -> InterpInstance {
        let f = f97();
        let e = Matrix::from_rows(f, &[vec![1, 0], vec![1, 0]]).unwrap();
        InterpInstance::new(e, JordanSpec::nilpotent(f, &[2]).unwrap().0, Shift::zeros(2)).unwrap()
    }

    #[test]
    fn known_degree_examples() {
        let f = f97();
        let inst = two_block_instance();
        let p = known_mindeg_mib(&inst, &MinimalDegree::new(vec![2, 0])).unwrap();
        let expect = PolyMat::from_i64(f, &[vec![vec![0, 0, 1], vec![]], vec![vec![-1], vec![1]]]).unwrap();
        assert_eq!(p, expect);

        let zero = InterpInstance::new(
            Matrix::zeros(f, 3, 5),
            JordanSpec::nilpotent(f, &[3, 2]).unwrap().0,
            Shift::new(vec![1, 0, 2]),
        )
        .unwrap();
        assert_eq!(known_mindeg_mib(&zero, &MinimalDegree::zeros(3)).unwrap(), PolyMat::identity(f, 3));
        assert_eq!(
            known_mindeg_mib(&inst, &MinimalDegree::new(vec![0, 1])),
            Err(Error::InconsistentMinimalDegree)
        );
    }

    #[test]
    fn known_degree_matches_iterative() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut tried = 0;
        while tried < 200 {
            let p = if tried % 2 == 0 { 97 } else { NTT_PRIME };
            let f = Modulus::new(p).unwrap();
            let m = rng.gen_range(1..=5);
            let sigma = rng.gen_range(m..=40);
            let inst = random_instance(&mut rng, f, m, sigma);
            let (expect, d) = iterative_mib(&inst);
            let run = known_mindeg_mib_detailed(&inst, &d).unwrap();
            assert_eq!(run.basis, expect);
            let cdeg: Vec<usize> = run.reduced.column_degree().iter().map(|c| c.unwrap()).collect();
            assert_eq!(cdeg, run.plan.expanded_degree);
            let inv = run.leading.inverse().unwrap();
            assert_eq!(left_mul_constant(&inv, &run.reduced).unwrap(), run.normalized);
            tried += 1;
        }
    }

    #[test]
    fn popov_examples() {
        let f = f97();
        let empty = InterpInstance::new(Matrix::zeros(f, 2, 0), JordanSpec::empty(f), Shift::zeros(2)).unwrap();
        assert_eq!(popov_mib(&empty).unwrap(), (PolyMat::identity(f, 2), MinimalDegree::zeros(2)));
        let inst = two_block_instance();
        assert_eq!(popov_mib(&inst).unwrap(), iterative_mib(&inst));
        let one = InterpInstance::new(
            Matrix::from_rows(f, &[vec![1], vec![1]]).unwrap(),
            JordanSpec::nilpotent(f, &[1]).unwrap().0,
            Shift::zeros(2),
        )
        .unwrap();
        assert_eq!(popov_mib(&one).unwrap(), iterative_mib(&one));
    }

    #[test]
    fn popov_matches_iterative_and_splits_add_up() {
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        for round in 0..80 {
            let f = Modulus::new(if round % 2 == 0 { 97 } else { NTT_PRIME }).unwrap();
            let m = rng.gen_range(1..=5);
            let sigma = rng.gen_range(0..=40);
            let inst = random_instance(&mut rng, f, m, sigma);
            let (p, d, trace) = popov_mib_traced(&inst).unwrap();
            assert_eq!((p, d), iterative_mib(&inst));
            for t in &trace {
                assert_eq!(t.degree, t.first_degree.plus(&t.second_degree));
                assert!(t.degree.sum() <= t.sigma);
                let prod = t.second.matmul(&t.first).unwrap();
                assert!(prod.is_weak_popov(&t.shift, true));
                assert_eq!(prod.pivot_degree(&t.shift).unwrap(), t.degree.entries());
                assert_eq!(prod.weak_popov_to_popov(&t.shift).unwrap(), t.basis);
            }
        }
    }
}
