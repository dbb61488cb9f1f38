use crate::error::{Error, Result};
use crate::jordan::{JordanBlock, JordanSpec};
use crate::linalg::Matrix;
use crate::mib::{InterpInstance, MinimalDegree};
use crate::polymat::{PolyMat, Shift};
use crate::popov::popov_mib;

/// Hermite-Padé approximation: find all `p` with `p * F_j = 0 mod X^(orders_j)`
/// for every column `F_j` of `F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproximantProblem {
    f: PolyMat,
    orders: Vec<usize>,
    shift: Shift,
}

impl ApproximantProblem {
    pub fn new(f: PolyMat, orders: Vec<usize>, shift: Shift) -> Result<Self> {
        if orders.len() != f.cols() {
            return Err(Error::InvalidProblem(format!(
                "{} orders for {} columns",
                orders.len(),
                f.cols()
            )));
        }
        if orders.contains(&0) {
            return Err(Error::InvalidProblem("orders must be positive".into()));
        }
        if shift.len() != f.rows() {
            return Err(Error::DimensionMismatch(format!(
                "shift of length {} for {} rows",
                shift.len(),
                f.rows()
            )));
        }
        for (j, (d, &o)) in f.column_degree().iter().zip(&orders).enumerate() {
            if d.is_some_and(|d| d >= o) {
                return Err(Error::InvalidProblem(format!(
                    "column {j} has degree {} but order {o}",
                    d.unwrap_or(0)
                )));
            }
        }
        Ok(ApproximantProblem { f, orders, shift })
    }

    pub fn series(&self) -> &PolyMat {
        &self.f
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn shift(&self) -> &Shift {
        &self.shift
    }

    /// One nilpotent block per column, holding that column's coefficients.
    pub fn to_instance(&self) -> Result<InterpInstance> {
        let fm = self.f.modulus();
        let sigma: usize = self.orders.iter().sum();
        let mut e = Matrix::zeros(fm, self.f.rows(), sigma);
        let mut off = 0;
        for (j, &o) in self.orders.iter().enumerate() {
            for i in 0..self.f.rows() {
                for (k, &c) in self.f.get(i, j).coeffs().iter().enumerate() {
                    e.set(i, off + k, c);
                }
            }
            off += o;
        }
        let blocks: Vec<JordanBlock> =
            self.orders.iter().map(|&size| JordanBlock { eigenvalue: 0, size }).collect();
        let (j, e) = JordanSpec::standardize(fm, &blocks, &e)?;
        InterpInstance::new(e, j, self.shift.clone())
    }

    /// Checks the order conditions of every row of `p` by truncated products.
    pub fn satisfies_orders(&self, p: &PolyMat) -> bool {
        if p.cols() != self.f.rows() {
            return false;
        }
        (0..p.rows()).all(|r| {
            self.orders.iter().enumerate().all(|(j, &o)| {
                let mut acc = crate::poly::Poly::zero(p.modulus());
                for i in 0..p.cols() {
                    acc.add_assign_ref(&p.get(r, i).mul_trunc(self.f.get(i, j), o));
                }
                acc.is_zero()
            })
        })
    }
}

/// The s-Popov basis of approximants and its minimal degree.
pub fn order_basis(prob: &ApproximantProblem) -> Result<(PolyMat, MinimalDegree)> {
    popov_mib(&prob.to_instance()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Modulus;
    use crate::mib::iterative_mib;
    use crate::poly::Poly;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn examples() {
        let f = Modulus::new(97).unwrap();
        let series = PolyMat::from_i64(f, &[vec![vec![1]], vec![vec![1]]]).unwrap();
        let prob = ApproximantProblem::new(series, vec![2], Shift::zeros(2)).unwrap();
        let (p, d) = order_basis(&prob).unwrap();
        assert_eq!(p, PolyMat::from_i64(f, &[vec![vec![0, 0, 1], vec![]], vec![vec![-1], vec![1]]]).unwrap());
        assert_eq!(d.entries(), &[2, 0]);

        let zero = ApproximantProblem::new(PolyMat::zeros(f, 3, 2), vec![4, 1], Shift::zeros(3)).unwrap();
        assert_eq!(order_basis(&zero).unwrap(), (PolyMat::identity(f, 3), MinimalDegree::zeros(3)));

        assert!(ApproximantProblem::new(PolyMat::zeros(f, 2, 1), vec![0], Shift::zeros(2)).is_err());
        let high = PolyMat::from_i64(f, &[vec![vec![0, 0, 1]]]).unwrap();
        assert!(ApproximantProblem::new(high, vec![2], Shift::zeros(1)).is_err());
    }

    #[test]
    fn random_series_satisfy_orders() {
        let f = Modulus::new(97).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let series = PolyMat::from_rows(
                (0..4)
                    .map(|_| {
                        (0..2)
                            .map(|_| Poly::from_coeffs(f, (0..8).map(|_| rng.gen_range(0..97)).collect()))
                            .collect()
                    })
                    .collect(),
            )
            .unwrap();
            let prob = ApproximantProblem::new(series, vec![8, 8], Shift::zeros(4)).unwrap();
            let (p, _) = order_basis(&prob).unwrap();
            assert!(prob.satisfies_orders(&p));
            assert_eq!(p, iterative_mib(&prob.to_instance().unwrap()).0);
        }
    }
}
