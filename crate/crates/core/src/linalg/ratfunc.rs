//! Rational functions in one indeterminate `t` over F_p, the exact model of
//! the local field used throughout: `t` is the uniformizer, and the ring of
//! integers meets F_p(t) in the functions with nonnegative `t`-adic valuation.

use std::fmt;

use super::poly::{inv_mod, Poly};

/// `num / den` in lowest terms with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn zero(p: u32) -> Self {
        RatFunc { num: Poly::zero(p), den: Poly::one(p) }
    }

    pub fn one(p: u32) -> Self {
        Self::constant(p, 1)
    }

    pub fn constant(p: u32, c: i64) -> Self {
        RatFunc { num: Poly::constant(p, c), den: Poly::one(p) }
    }

    /// `c * t^k` for any integer `k`.
    pub fn monomial(p: u32, c: i64, k: i64) -> Self {
        if k >= 0 {
            Self::from_poly(Poly::monomial(p, c, k as usize))
        } else {
            Self::new(Poly::constant(p, c), Poly::monomial(p, 1, (-k) as usize))
        }
    }

    pub fn t(p: u32) -> Self {
        Self::monomial(p, 1, 1)
    }

    pub fn from_poly(num: Poly) -> Self {
        let p = num.modulus();
        RatFunc { num, den: Poly::one(p) }
    }

    /// Builds the reduced fraction; panics if `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let p = num.modulus();
        if num.is_zero() {
            return Self::zero(p);
        }
        let g = num.gcd(&den);
        let (mut n, _) = num.divrem(&g);
        let (mut d, _) = den.divrem(&g);
        let lc = d.leading();
        if lc != 1 {
            let inv = inv_mod(lc, p);
            n = n.scale(inv);
            d = d.scale(inv);
        }
        RatFunc { num: n, den: d }
    }

    pub fn modulus(&self) -> u32 {
        self.num.modulus()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone());
        }
        Self::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.modulus());
        }
        if self.den.is_one() && o.den.is_one() {
            return Self::from_poly(self.num.mul(&o.num));
        }
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn inv(&self) -> Option<RatFunc> {
        if self.is_zero() {
            None
        } else {
            Some(Self::new(self.den.clone(), self.num.clone()))
        }
    }

    pub fn div(&self, o: &RatFunc) -> Option<RatFunc> {
        o.inv().map(|i| self.mul(&i))
    }

    /// `t`-adic valuation; `None` stands for +infinity (the zero function).
    pub fn val(&self) -> Option<i64> {
        let a = self.num.ord()? as i64;
        let b = self.den.ord().expect("nonzero denominator") as i64;
        Some(a - b)
    }

    /// Valuation with +infinity mapped to `i64::MAX`.
    pub fn val_or_max(&self) -> i64 {
        self.val().unwrap_or(i64::MAX)
    }

    pub fn is_integral(&self) -> bool {
        self.val().is_none_or(|v| v >= 0)
    }

    /// Leading `t`-adic coefficient: the residue of `self * t^{-val}`.
    /// Zero for the zero function.
    pub fn angular_component(&self) -> u32 {
        let (Some(a), Some(b)) = (self.num.ord(), self.den.ord()) else {
            return 0;
        };
        let p = self.modulus() as u64;
        (self.num.coeff(a) as u64 * inv_mod(self.den.coeff(b), self.modulus()) as u64 % p) as u32
    }

    /// Value at `t = 0` of an integral function.
    pub fn residue(&self) -> u32 {
        debug_assert!(self.is_integral());
        match self.val() {
            Some(0) => self.angular_component(),
            _ => 0,
        }
    }

    /// Laurent coefficients of `t^j` for `lo <= j < hi`.
    pub fn laurent(&self, lo: i64, hi: i64) -> Vec<u32> {
        let mut out = vec![0u32; (hi - lo).max(0) as usize];
        let Some(v) = self.val() else {
            return out;
        };
        if v >= hi {
            return out;
        }
        let b = self.den.ord().expect("nonzero denominator");
        let a = self.num.ord().expect("nonzero numerator");
        // self = t^v * (num / t^a) / (den / t^b)
        let n0 = self.num.unshift(a);
        let d0 = self.den.unshift(b);
        let len = (hi - v) as usize;
        let series = n0.series_div(&d0, len);
        for (k, c) in series.into_iter().enumerate() {
            let j = v + k as i64;
            if j >= lo && j < hi {
                out[(j - lo) as usize] = c;
            }
        }
        out
    }

    /// Image in `F_p[t]/(t^m)` of an integral function.
    pub fn truncate(&self, m: usize) -> Vec<u32> {
        debug_assert!(self.is_integral());
        self.laurent(0, m as i64)
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(p: u32, c: &[u32]) -> Poly {
        Poly::from_coeffs(p, c.to_vec())
    }

    #[test]
    fn valuation_examples() {
        let p = 3;
        let t2_over_1pt = RatFunc::new(poly(p, &[0, 0, 1]), poly(p, &[1, 1]));
        assert_eq!(t2_over_1pt.val(), Some(2));
        assert_eq!(RatFunc::zero(p).val(), None);
        let onept_over_t = RatFunc::new(poly(p, &[1, 1]), poly(p, &[0, 1]));
        assert_eq!(onept_over_t.val(), Some(-1));
        assert_eq!(RatFunc::t(p).val(), Some(1));
    }

    #[test]
    fn reduced_form_is_canonical() {
        let p = 2;
        let a = RatFunc::new(poly(p, &[1, 1]), poly(p, &[1, 0, 1]));
        let b = RatFunc::new(poly(p, &[1]), poly(p, &[1, 1]));
        assert_eq!(a, b);
    }

    #[test]
    fn laurent_expansion() {
        let p = 2;
        // 1/(t(1+t)) = t^-1 + 1 + t + ...  (char 2)
        let f = RatFunc::new(poly(p, &[1]), poly(p, &[0, 1, 1]));
        assert_eq!(f.laurent(-1, 2), vec![1, 1, 1]);
        assert_eq!(f.angular_component(), 1);
    }
}
