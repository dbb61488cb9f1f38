//! Seeded generators of random instances, for tests and benchmarks.

use rand::Rng;

use crate::field::Modulus;
use crate::jordan::{JordanBlock, JordanSpec};
use crate::linalg::Matrix;
use crate::mib::InterpInstance;
use crate::polymat::Shift;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftKind {
    Zero,
    /// `(0, sigma, 2 sigma, ..., (m - 1) sigma)`.
    Hermite,
    /// Uniform entries in `[0, m * sigma]`.
    Uniform,
}

/// Random instance with `m` rows, dimension `sigma`, `eigenvalues` distinct
/// eigenvalue candidates and blocks of size at most `max_block`.
pub fn random_instance(
    rng: &mut impl Rng,
    modulus: Modulus,
    m: usize,
    sigma: usize,
    eigenvalues: usize,
    max_block: usize,
    shift: ShiftKind,
) -> InterpInstance {
    let eig = distinct_values(rng, modulus, eigenvalues.max(1));
    let mut blocks = Vec::new();
    let mut left = sigma;
    while left > 0 {
        let size = rng.gen_range(1..=left.min(max_block.max(1)));
        blocks.push(JordanBlock { eigenvalue: eig[rng.gen_range(0..eig.len())], size });
        left -= size;
    }
    let e = Matrix::from_fn(modulus, m, sigma, |_, _| rng.gen_range(0..modulus.p()));
    let (j, e) = JordanSpec::standardize(modulus, &blocks, &e).expect("positive sizes");
    let shift = random_shift(rng, m, sigma, shift);
    InterpInstance::new(e, j, shift).expect("consistent dimensions")
}

pub fn random_shift(rng: &mut impl Rng, m: usize, sigma: usize, kind: ShiftKind) -> Shift {
    match kind {
        ShiftKind::Zero => Shift::zeros(m),
        ShiftKind::Hermite => Shift::new((0..m).map(|i| (i * sigma) as i64).collect()),
        ShiftKind::Uniform => {
            let top = (m * sigma) as i64;
            Shift::new((0..m).map(|_| rng.gen_range(0..=top)).collect())
        }
    }
}

/// `count` distinct residues (fewer if the field is smaller).
pub fn distinct_values(rng: &mut impl Rng, modulus: Modulus, count: usize) -> Vec<u64> {
    let count = count.min(modulus.p() as usize);
    let mut out: Vec<u64> = Vec::with_capacity(count);
    while out.len() < count {
        let v = rng.gen_range(0..modulus.p());
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}
