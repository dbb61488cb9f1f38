use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Modulus;
use crate::mib::iterative_weak_popov;
use crate::poly::Poly;
use crate::polymat::{PolyMat, Shift};

use super::order_basis::ApproximantProblem;

/// A `2m x 1` approximation problem whose minimal (non-Popov) bases are
/// dense: `F = [f, f + Xf, X(f + Xf), ..., X^(m-2)(f + Xf), f_1, ..., f_m]`
/// mod `X^sigma`, with `f(0) != 0` and shift `(0, ..., 0, sigma, ..., sigma)`.
pub fn adversarial_instance(modulus: Modulus, m: usize, sigma: usize, seed: u64) -> Result<ApproximantProblem> {
    if m < 2 || sigma < m {
        return Err(Error::InvalidProblem(format!("need sigma >= m >= 2, got m = {m}, sigma = {sigma}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = modulus.p();
    let random_poly = |rng: &mut ChaCha8Rng| {
        Poly::from_coeffs(modulus, (0..sigma).map(|_| rng.gen_range(0..p)).collect())
    };
    let mut f = random_poly(&mut rng).into_coeffs();
    f.resize(sigma, 0);
    f[0] = rng.gen_range(1..p);
    let f = Poly::from_coeffs(modulus, f);
    let g = (&f + &f.shift_up(1)).truncate(sigma);
    let mut column = vec![f.clone()];
    for k in 0..m - 1 {
        column.push(g.shift_up(k).truncate(sigma));
    }
    for _ in 0..m {
        column.push(random_poly(&mut rng));
    }
    let series = PolyMat::from_rows(column.into_iter().map(|c| vec![c]).collect())?;
    let shift = Shift::new((0..2 * m).map(|i| if i < m { 0 } else { sigma as i64 }).collect());
    ApproximantProblem::new(series, vec![sigma], shift)
}

/// Degree pattern of the dense weak Popov basis, with `d = sigma - m`:
/// rows `0..m-1` have degree 1 up to the diagonal and a constant just right
/// of it, row `m - 1` has degree `d + 1` on the first `m` columns, and each
/// remaining row has degree `d` there plus a constant on the diagonal.
pub fn adversarial_profile(m: usize, sigma: usize) -> Vec<Vec<Option<usize>>> {
    let d = sigma - m;
    let mut rows = vec![vec![None; 2 * m]; 2 * m];
    for (i, row) in rows.iter_mut().enumerate().take(m - 1) {
        row[..=i].fill(Some(1));
        row[i + 1] = Some(0);
    }
    rows[m - 1][..m].fill(Some(d + 1));
    for k in 0..m {
        let row = &mut rows[m + k];
        row[..m].fill(Some(d));
        row[m + k] = Some(0);
    }
    rows
}

#[derive(Clone, Debug)]
pub struct GenericAdversarial {
    pub problem: ApproximantProblem,
    /// Seed that produced `problem`.
    pub seed: u64,
    /// Seeds tried before it whose iterative basis had a different profile.
    pub rejected: Vec<u64>,
}

/// Tries seeds `seed, seed + 1, ...` until the iterative weak Popov basis
/// has exactly the profile of [`adversarial_profile`].
pub fn find_generic_adversarial(
    modulus: Modulus,
    m: usize,
    sigma: usize,
    seed: u64,
    attempts: usize,
) -> Result<GenericAdversarial> {
    let expect = adversarial_profile(m.max(2), sigma.max(m));
    let mut rejected = Vec::new();
    for k in 0..attempts as u64 {
        let s = seed.wrapping_add(k);
        let problem = adversarial_instance(modulus, m, sigma, s)?;
        let (w, _) = iterative_weak_popov(&problem.to_instance()?);
        if w.degree_profile() == expect {
            return Ok(GenericAdversarial { problem, seed: s, rejected });
        }
        rejected.push(s);
    }
    Err(Error::InvalidProblem(format!("no generic instance in {attempts} seeds from {seed}")))
}
