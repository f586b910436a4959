//! Dense univariate polynomials over a prime field F_p.

use std::fmt;

/// Polynomial in `t` over F_p, coefficients in increasing degree.
///
/// The coefficient vector never has trailing zeros, so the zero polynomial
/// is the empty vector and derived equality is structural equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    p: u32,
    coeffs: Vec<u32>,
}

#[inline]
pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    let (mut r0, mut r1) = (p as i64, (a % p) as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    s0.rem_euclid(p as i64) as u32
}

impl Poly {
    pub fn zero(p: u32) -> Self {
        Poly { p, coeffs: Vec::new() }
    }

    pub fn constant(p: u32, c: i64) -> Self {
        Self::from_coeffs(p, vec![c.rem_euclid(p as i64) as u32])
    }

    pub fn one(p: u32) -> Self {
        Self::constant(p, 1)
    }

    /// `c * t^k`
    pub fn monomial(p: u32, c: i64, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c.rem_euclid(p as i64) as u32;
        Self::from_coeffs(p, coeffs)
    }

    pub fn from_coeffs(p: u32, mut coeffs: Vec<u32>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { p, coeffs }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> u32 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    /// Order of vanishing at `t = 0`; `None` for the zero polynomial.
    pub fn ord(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n).map(|i| (self.coeff(i) + o.coeff(i)) % self.p).collect();
        Self::from_coeffs(self.p, v)
    }

    pub fn neg(&self) -> Poly {
        let p = self.p;
        Self::from_coeffs(p, self.coeffs.iter().map(|&c| (p - c) % p).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: u32) -> Poly {
        let p = self.p as u64;
        Self::from_coeffs(
            self.p,
            self.coeffs.iter().map(|&a| ((a as u64 * c as u64) % p) as u32).collect(),
        )
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.p);
        }
        let p = self.p as u64;
        let mut v = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                v[i + j] = (v[i + j] + a as u64 * b as u64) % p;
            }
        }
        Self::from_coeffs(self.p, v.into_iter().map(|x| x as u32).collect())
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![0; k];
        v.extend_from_slice(&self.coeffs);
        Poly { p: self.p, coeffs: v }
    }

    /// Divide by `t^k`; the low coefficients must vanish.
    pub fn unshift(&self, k: usize) -> Poly {
        debug_assert!(self.coeffs.iter().take(k).all(|&c| c == 0));
        Poly { p: self.p, coeffs: self.coeffs.iter().skip(k).copied().collect() }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let p = self.p as u64;
        let inv_lead = inv_mod(d.leading(), self.p) as u64;
        let mut r: Vec<u64> = self.coeffs.iter().map(|&c| c as u64).collect();
        if r.len() <= dd {
            return (Poly::zero(self.p), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd] % p * inv_lead % p;
            q[k] = c;
            if c != 0 {
                for (j, &b) in d.coeffs.iter().enumerate() {
                    r[k + j] = (r[k + j] + (p - c) * b as u64) % p;
                }
            }
        }
        r.truncate(dd);
        (
            Self::from_coeffs(self.p, q.into_iter().map(|x| x as u32).collect()),
            Self::from_coeffs(self.p, r.into_iter().map(|x| x as u32).collect()),
        )
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.leading(), self.p))
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: u32) -> u32 {
        let p = self.p as u64;
        self.coeffs.iter().rev().fold(0u64, |acc, &c| (acc * x as u64 + c as u64) % p) as u32
    }

    /// First `m` coefficients of the power series `self / other`, where
    /// `other(0) != 0`.
    pub fn series_div(&self, other: &Poly, m: usize) -> Vec<u32> {
        let p = self.p as u64;
        let c0 = other.coeff(0);
        assert!(c0 != 0, "series division by a non-unit");
        let inv0 = inv_mod(c0, self.p) as u64;
        let mut out = vec![0u32; m];
        for k in 0..m {
            let mut acc = self.coeff(k) as u64;
            for j in 1..=k.min(other.coeffs.len().saturating_sub(1)) {
                acc = (acc + (p - other.coeff(j) as u64) * out[k - j] as u64) % p;
            }
            out[k] = (acc * inv0 % p) as u32;
        }
        out
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (k, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, c) => write!(f, "{c}t")?,
                (k, 1) => write!(f, "t^{k}")?,
                (k, c) => write!(f, "{c}t^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_reconstructs() {
        let a = Poly::from_coeffs(3, vec![1, 2, 0, 1, 2]);
        let b = Poly::from_coeffs(3, vec![2, 1, 1]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn gcd_is_monic_common_factor() {
        let f = Poly::from_coeffs(2, vec![1, 1]);
        let a = f.mul(&Poly::from_coeffs(2, vec![1, 0, 1]));
        let b = f.mul(&Poly::from_coeffs(2, vec![0, 1]));
        assert_eq!(a.gcd(&b), f);
    }

    #[test]
    fn series_inverse_of_one_plus_t() {
        // 1/(1+t) = 1 - t + t^2 - ... over F_3
        let s = Poly::one(3).series_div(&Poly::from_coeffs(3, vec![1, 1]), 4);
        assert_eq!(s, vec![1, 2, 1, 2]);
    }
}
