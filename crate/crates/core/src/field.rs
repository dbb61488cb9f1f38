//! Prime field arithmetic on canonical residues.
//!
//! Elements are plain `u64` values in `[0, p)`; every operation takes and
//! returns canonical residues. Products go through a double-width
//! intermediate, so any prime below `2^63` is supported.

use crate::error::{Error, Result};

/// A field element, stored as its canonical residue in `[0, p)`.
pub type FieldElement = u64;

/// NTT-friendly prime `119 * 2^23 + 1`.
pub const NTT_PRIME: u64 = 998_244_353;

/// A validated odd prime modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Modulus {
    p: u64,
}

impl Modulus {
    pub fn new(p: u64) -> Result<Self> {
        if p <= 2 || p >= 1 << 63 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Modulus { p })
    }

    #[inline]
    pub fn p(self) -> u64 {
        self.p
    }

    /// Reduces an arbitrary `u64`.
    #[inline]
    pub fn reduce(self, a: u64) -> FieldElement {
        a % self.p
    }

    /// Maps a signed integer to its residue.
    pub fn from_i64(self, a: i64) -> FieldElement {
        let r = a.rem_euclid(self.p as i64);
        r as u64
    }

    /// Checks that `a` is canonical.
    pub fn check(self, a: u64) -> Result<FieldElement> {
        if a < self.p {
            Ok(a)
        } else {
            Err(Error::ResidueOutOfRange { value: a, p: self.p })
        }
    }

    #[inline]
    pub fn add(self, a: FieldElement, b: FieldElement) -> FieldElement {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: FieldElement) -> FieldElement {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p < 1 << 32 {
            (a * b) % self.p
        } else {
            ((a as u128 * b as u128) % self.p as u128) as u64
        }
    }

    /// `a * b + c`.
    #[inline]
    pub fn mul_add(self, a: FieldElement, b: FieldElement, c: FieldElement) -> FieldElement {
        self.add(self.mul(a, b), c)
    }

    pub fn pow(self, mut a: FieldElement, mut e: u64) -> FieldElement {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self, a: FieldElement) -> Option<FieldElement> {
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }

    /// Largest `k` such that `2^k` divides `p - 1`.
    pub fn two_adicity(self) -> u32 {
        (self.p - 1).trailing_zeros()
    }

    /// A primitive `2^k`-th root of unity, if the field has one.
    pub fn root_of_unity(self, k: u32) -> Option<FieldElement> {
        if k > self.two_adicity() {
            return None;
        }
        let half = (self.p - 1) / 2;
        // any quadratic non-residue generates the full 2-Sylow subgroup
        let g = (2..self.p).find(|&g| self.pow(g, half) == self.p - 1)?;
        let w = self.pow(g, (self.p - 1) >> self.two_adicity());
        Some(self.pow(w, 1 << (self.two_adicity() - k)))
    }

    /// Binomial coefficient `C(n, k)` reduced modulo `p` (digit-wise, base `p`).
    pub fn binomial(self, n: u64, k: u64) -> FieldElement {
        if k > n {
            return 0;
        }
        let (mut n, mut k) = (n, k);
        let mut r = 1;
        while n > 0 || k > 0 {
            let (ni, ki) = (n % self.p, k % self.p);
            if ki > ni {
                return 0;
            }
            let mut num = 1;
            let mut den = 1;
            for i in 0..ki {
                num = self.mul(num, ni - i);
                den = self.mul(den, i + 1);
            }
            r = self.mul(r, self.mul(num, self.inv(den).expect("nonzero")));
            n /= self.p;
            k /= self.p;
        }
        r
    }
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod_u64(r, a, m);
        }
        a = mul_mod_u64(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &BASES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}
