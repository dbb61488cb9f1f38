//! Dense univariate polynomials over a prime field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{FieldElement, Modulus};

/// Below this operand length products use the schoolbook method.
const SCHOOLBOOK_THRESHOLD: usize = 32;

/// Polynomial with coefficients stored low degree first.
///
/// The coefficient vector never ends with a zero, so the zero polynomial is
/// the empty vector and its degree is `None` (which orders below every
/// `Some(d)`, matching the usual convention `deg 0 = -inf`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    modulus: Modulus,
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn zero(modulus: Modulus) -> Self {
        Poly { modulus, coeffs: Vec::new() }
    }

    pub fn one(modulus: Modulus) -> Self {
        Poly { modulus, coeffs: vec![1] }
    }

    pub fn constant(modulus: Modulus, c: FieldElement) -> Self {
        Self::from_coeffs(modulus, vec![c])
    }

    /// The indeterminate `X`.
    pub fn x(modulus: Modulus) -> Self {
        Poly { modulus, coeffs: vec![0, 1] }
    }

    /// `c * X^k`.
    pub fn monomial(modulus: Modulus, c: FieldElement, k: usize) -> Self {
        let c = modulus.reduce(c);
        if c == 0 {
            return Self::zero(modulus);
        }
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Poly { modulus, coeffs }
    }

    /// `X - a`.
    pub fn linear(modulus: Modulus, a: FieldElement) -> Self {
        Poly { modulus, coeffs: vec![modulus.neg(modulus.reduce(a)), 1] }
    }

    /// Builds a polynomial from arbitrary `u64` coefficients, reducing them.
    pub fn from_coeffs(modulus: Modulus, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c = modulus.reduce(*c);
        }
        let mut p = Poly { modulus, coeffs };
        p.normalize();
        p
    }

    /// Builds a polynomial from coefficients that must already be canonical.
    pub fn from_residues(modulus: Modulus, coeffs: Vec<u64>) -> Result<Self> {
        for &c in &coeffs {
            modulus.check(c)?;
        }
        let mut p = Poly { modulus, coeffs };
        p.normalize();
        Ok(p)
    }

    pub fn from_i64(modulus: Modulus, coeffs: &[i64]) -> Self {
        let coeffs = coeffs.iter().map(|&c| modulus.from_i64(c)).collect();
        let mut p = Poly { modulus, coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    #[inline]
    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<FieldElement> {
        self.coeffs
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of stored coefficients (`deg + 1`, or 0 for the zero polynomial).
    #[inline]
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `X^i` (zero past the degree).
    #[inline]
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn leading_coeff(&self) -> Option<FieldElement> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff() == Some(1)
    }

    pub fn eval(&self, x: FieldElement) -> FieldElement {
        let f = self.modulus;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.mul_add(acc, x, c))
    }

    fn assert_same_field(&self, other: &Poly) {
        assert_eq!(
            self.modulus, other.modulus,
            "polynomials over different fields"
        );
    }

    pub fn scale(&self, c: FieldElement) -> Poly {
        let f = self.modulus;
        if c == 0 {
            return Poly::zero(f);
        }
        Poly { modulus: f, coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect() }
    }

    /// Multiplies by `X^k`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { modulus: self.modulus, coeffs }
    }

    /// Remainder modulo `X^k`.
    pub fn truncate(&self, k: usize) -> Poly {
        let mut coeffs = self.coeffs[..k.min(self.len())].to_vec();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { modulus: self.modulus, coeffs }
    }

    /// `self * other mod X^k`.
    pub fn mul_trunc(&self, other: &Poly, k: usize) -> Poly {
        self.assert_same_field(other);
        let f = self.modulus;
        let a = &self.coeffs[..self.len().min(k)];
        let b = &other.coeffs[..other.len().min(k)];
        let mut c = if a.len().min(b.len()) <= SCHOOLBOOK_THRESHOLD {
            schoolbook_trunc(f, a, b, k)
        } else {
            let mut c = mul_slices(f, a, b);
            c.truncate(k);
            c
        };
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { modulus: f, coeffs: c }
    }

    /// Product by the schoolbook method only; kept as a reference for the
    /// fast paths.
    pub fn mul_schoolbook(&self, other: &Poly) -> Poly {
        self.assert_same_field(other);
        let c = schoolbook(self.modulus, &self.coeffs, &other.coeffs);
        Poly::from_residues(self.modulus, c).expect("canonical")
    }

    /// Euclidean division: `self = q * b + r` with `deg r < deg b`.
    pub fn divrem(&self, b: &Poly) -> Result<(Poly, Poly)> {
        self.assert_same_field(b);
        let f = self.modulus;
        let db = b.degree().ok_or(Error::ZeroDivisor)?;
        if self.len() <= db {
            return Ok((Poly::zero(f), self.clone()));
        }
        let inv_lc = f.inv(b.coeffs[db]).expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        let mut q = vec![0; self.len() - db];
        for i in (0..q.len()).rev() {
            let c = f.mul(r[i + db], inv_lc);
            q[i] = c;
            if c != 0 {
                for (j, &bj) in b.coeffs.iter().enumerate() {
                    r[i + j] = f.sub(r[i + j], f.mul(c, bj));
                }
            }
        }
        r.truncate(db);
        let mut q = Poly { modulus: f, coeffs: q };
        let mut r = Poly { modulus: f, coeffs: r };
        q.normalize();
        r.normalize();
        Ok((q, r))
    }

    /// Returns `self(X + x)`.
    pub fn taylor_shift(&self, x: FieldElement) -> Poly {
        self.taylor_shift_trunc(x, self.len())
    }

    /// Returns `self(X + x) mod X^k`, by Horner's rule on `(X + x)` inside
    /// the truncated ring.
    pub fn taylor_shift_trunc(&self, x: FieldElement, k: usize) -> Poly {
        let f = self.modulus;
        if x == 0 {
            return self.truncate(k);
        }
        let k = k.min(self.len());
        let mut acc: Vec<FieldElement> = vec![0; k];
        let mut used = 0;
        for &c in self.coeffs.iter().rev() {
            // acc <- acc * (X + x) + c  (mod X^k)
            let top = (used + 1).min(k);
            for i in (1..top).rev() {
                acc[i] = f.mul_add(acc[i], x, acc[i - 1]);
            }
            if k > 0 {
                acc[0] = f.mul_add(acc[0], x, c);
            }
            used = top;
        }
        let mut p = Poly { modulus: f, coeffs: acc };
        p.normalize();
        p
    }

    pub fn make_monic(&self) -> Poly {
        match self.leading_coeff() {
            None | Some(1) => self.clone(),
            Some(lc) => self.scale(self.modulus.inv(lc).expect("nonzero")),
        }
    }

    /// `self += c * X^k * other`.
    pub fn add_scaled_shifted(&mut self, c: FieldElement, k: usize, other: &Poly) {
        self.assert_same_field(other);
        let f = self.modulus;
        if c == 0 || other.is_zero() {
            return;
        }
        if self.coeffs.len() < other.len() + k {
            self.coeffs.resize(other.len() + k, 0);
        }
        for (i, &b) in other.coeffs.iter().enumerate() {
            self.coeffs[i + k] = f.mul_add(c, b, self.coeffs[i + k]);
        }
        self.normalize();
    }

    pub fn add_assign_ref(&mut self, other: &Poly) {
        self.add_scaled_shifted(1, 0, other);
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "X")?,
                (1, c) => write!(f, "{c}X")?,
                (i, 1) => write!(f, "X^{i}")?,
                (i, c) => write!(f, "{c}X^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut r = self.clone();
        r.add_scaled_shifted(1, 0, rhs);
        r
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut r = self.clone();
        let minus_one = self.modulus.p() - 1;
        r.add_scaled_shifted(minus_one, 0, rhs);
        r
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = self.modulus;
        Poly { modulus: f, coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.assert_same_field(rhs);
        let f = self.modulus;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(f);
        }
        let mut c = mul_slices(f, &self.coeffs, &rhs.coeffs);
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { modulus: f, coeffs: c }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Full product of two coefficient slices (no trailing-zero cleanup).
pub(crate) fn mul_slices(f: Modulus, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len().min(b.len()) <= SCHOOLBOOK_THRESHOLD {
        return schoolbook(f, a, b);
    }
    let n = a.len() + b.len() - 1;
    let log = usize::BITS - (n - 1).leading_zeros();
    if log <= f.two_adicity() {
        ntt_mul(f, a, b, log)
    } else {
        karatsuba(f, a, b)
    }
}

fn schoolbook(f: Modulus, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    schoolbook_trunc(f, a, b, a.len() + b.len() - 1)
}

fn schoolbook_trunc(f: Modulus, a: &[u64], b: &[u64], k: usize) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let n = (a.len() + b.len() - 1).min(k);
    let p = f.p();
    let mut out = vec![0u64; n];
    if p < 1 << 32 {
        // products fit in 64 bits; accumulate in 128 bits and reduce once
        for (k, o) in out.iter_mut().enumerate() {
            let lo = k.saturating_sub(b.len() - 1);
            let hi = k.min(a.len() - 1);
            let mut acc: u128 = 0;
            for i in lo..=hi {
                acc += (a[i] * b[k - i]) as u128;
            }
            *o = (acc % p as u128) as u64;
        }
    } else {
        for (i, &ai) in a.iter().enumerate().take(n) {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate().take(n - i) {
                out[i + j] = f.mul_add(ai, bj, out[i + j]);
            }
        }
    }
    out
}

fn add_into(f: Modulus, dst: &mut [u64], src: &[u64]) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = f.add(*d, s);
    }
}

fn sub_into(f: Modulus, dst: &mut [u64], src: &[u64]) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = f.sub(*d, s);
    }
}

fn karatsuba(f: Modulus, a: &[u64], b: &[u64]) -> Vec<u64> {
    let (a, b) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if b.len() <= SCHOOLBOOK_THRESHOLD {
        return schoolbook(f, a, b);
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    if a.len() >= 2 * b.len() {
        // unbalanced: cut the long operand into pieces of the short length
        for (idx, chunk) in a.chunks(b.len()).enumerate() {
            let prod = karatsuba(f, chunk, b);
            add_into(f, &mut out[idx * b.len()..], &prod);
        }
        return out;
    }
    let h = a.len() / 2;
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h.min(b.len()));
    let z0 = karatsuba(f, a0, b0);
    if b1.is_empty() {
        let z1 = karatsuba(f, a1, b0);
        add_into(f, &mut out, &z0);
        add_into(f, &mut out[h..], &z1);
        return out;
    }
    let z2 = karatsuba(f, a1, b1);
    let mut sa = a0.to_vec();
    if sa.len() < a1.len() {
        sa.resize(a1.len(), 0);
    }
    add_into(f, &mut sa, a1);
    let mut sb = b0.to_vec();
    if sb.len() < b1.len() {
        sb.resize(b1.len(), 0);
    }
    add_into(f, &mut sb, b1);
    let mut z1 = karatsuba(f, &sa, &sb);
    sub_into(f, &mut z1, &z0);
    sub_into(f, &mut z1, &z2);
    add_into(f, &mut out, &z0);
    add_into(f, &mut out[h..], &z1);
    add_into(f, &mut out[2 * h..], &z2);
    out
}

fn ntt(f: Modulus, a: &mut [u64], root: u64) {
    let n = a.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j ^= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let w = f.pow(root, (n / len) as u64);
        for start in (0..n).step_by(len) {
            let mut wk = 1;
            for k in 0..len / 2 {
                let u = a[start + k];
                let v = f.mul(a[start + k + len / 2], wk);
                a[start + k] = f.add(u, v);
                a[start + k + len / 2] = f.sub(u, v);
                wk = f.mul(wk, w);
            }
        }
        len <<= 1;
    }
}

fn ntt_mul(f: Modulus, a: &[u64], b: &[u64], log: u32) -> Vec<u64> {
    let n = 1usize << log;
    let root = f.root_of_unity(log).expect("two-adicity checked");
    let mut fa = a.to_vec();
    fa.resize(n, 0);
    let mut fb = b.to_vec();
    fb.resize(n, 0);
    ntt(f, &mut fa, root);
    ntt(f, &mut fb, root);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = f.mul(*x, *y);
    }
    ntt(f, &mut fa, f.inv(root).expect("nonzero"));
    let n_inv = f.inv(f.reduce(n as u64)).expect("n < p");
    fa.truncate(a.len() + b.len() - 1);
    for x in fa.iter_mut() {
        *x = f.mul(*x, n_inv);
    }
    fa
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::NTT_PRIME;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f97() -> Modulus {
        Modulus::new(97).unwrap()
    }

    fn random_poly(rng: &mut impl Rng, f: Modulus, len: usize) -> Poly {
        Poly::from_coeffs(f, (0..len).map(|_| rng.gen_range(0..f.p())).collect())
    }

    #[test]
    fn product_of_conjugates() {
        let f = f97();
        let a = Poly::from_i64(f, &[1, 1]);
        let b = Poly::from_i64(f, &[-1, 1]);
        assert_eq!((&a * &b).coeffs(), &[96, 0, 1]);
        assert!((&a * &Poly::zero(f)).is_zero());
    }

    #[test]
    fn fast_products_match_schoolbook() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [97, NTT_PRIME, 0x7fff_ffff_ffff_ffe7] {
            let f = Modulus::new(p).unwrap();
            for _ in 0..40 {
                let la = rng.gen_range(0..=200);
                let lb = rng.gen_range(0..=200);
                let a = random_poly(&mut rng, f, la);
                let b = random_poly(&mut rng, f, lb);
                assert_eq!(&a * &b, a.mul_schoolbook(&b), "p={p} {la}x{lb}");
                let k = rng.gen_range(0..=300);
                assert_eq!(a.mul_trunc(&b, k), a.mul_schoolbook(&b).truncate(k));
            }
        }
    }

    #[test]
    fn divrem_zero_divisor() {
        let f = f97();
        assert_eq!(Poly::one(f).divrem(&Poly::zero(f)), Err(Error::ZeroDivisor));
    }

    #[test]
    fn taylor_shift_examples() {
        let f = f97();
        let x2 = Poly::monomial(f, 1, 2);
        assert_eq!(x2.taylor_shift(1).coeffs(), &[1, 2, 1]);
        let q = Poly::from_i64(f, &[5, 0, 3, 7]);
        assert_eq!(q.taylor_shift(0), q);
        assert_eq!(q.taylor_shift_trunc(2, 2), q.taylor_shift(2).truncate(2));
        assert!(q.taylor_shift_trunc(2, 0).is_zero());
    }

    #[test]
    fn taylor_shift_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = f97();
        for _ in 0..100 {
            let len = rng.gen_range(0..30);
            let pl = random_poly(&mut rng, f, len);
            let x = rng.gen_range(0..97);
            assert_eq!(pl.taylor_shift(x).taylor_shift(f.neg(x)), pl);
        }
    }

    #[test]
    fn debug_format() {
        let f = f97();
        assert_eq!(format!("{:?}", Poly::from_i64(f, &[3, 1, 0, 2])), "2X^3 + X + 3");
        assert_eq!(format!("{:?}", Poly::zero(f)), "0");
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(0u64..97, 0..60).prop_map(|c| Poly::from_coeffs(f97(), c))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn division_identity(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.divrem(&b).unwrap();
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.degree() < b.degree());
        }

        #[test]
        fn taylor_shift_keeps_degree_and_lc(a in arb_poly(), x in 0u64..97) {
            let t = a.taylor_shift(x);
            prop_assert_eq!(t.degree(), a.degree());
            prop_assert_eq!(t.leading_coeff(), a.leading_coeff());
            // evaluation cross-check: t(y) = a(y + x)
            for y in [0u64, 1, 5, 96] {
                prop_assert_eq!(t.eval(y), a.eval((y + x) % 97));
            }
        }
    }
}
