//! Coefficient fields and their scalars.
//!
//! A [`Field`] is a small descriptor; [`Scalar`]s are plain values that only
//! make sense relative to a field. All arithmetic goes through the field so
//! that prime fields, extension fields, the rationals and rational functions
//! share one linear-algebra implementation.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{inv_mod, Poly};
use super::ratfunc::RatFunc;
use super::LinalgError;

/// Largest extension field for which we build full tables.
const MAX_EXT_SIZE: u32 = 256;

/// F_{p^d} realized as F_p[a]/(m(a)) with a fixed monic irreducible `m`.
///
/// Elements are encoded as integers `sum c_i p^i` (coefficient of `a^i`).
#[derive(Clone, PartialEq, Eq)]
pub struct ExtField {
    p: u32,
    d: u32,
    modulus: Poly,
    size: u32,
    mul: Vec<u16>,
    inv: Vec<u16>,
}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {}", self.p, self.d, self.modulus)
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|k| k * k <= p).all(|k| !p.is_multiple_of(k))
}

fn encode(p: u32, poly: &Poly) -> u32 {
    poly.coeffs().iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn decode(p: u32, d: u32, mut x: u32) -> Poly {
    let mut v = Vec::with_capacity(d as usize);
    for _ in 0..d {
        v.push(x % p);
        x /= p;
    }
    Poly::from_coeffs(p, v)
}

/// Lexicographically first monic irreducible polynomial of degree `d`.
pub fn first_irreducible(p: u32, d: u32) -> Poly {
    let count = p.pow(d);
    'candidates: for low in 0..count {
        let mut coeffs = decode(p, d, low).coeffs().to_vec();
        coeffs.resize(d as usize, 0);
        coeffs.push(1);
        let f = Poly::from_coeffs(p, coeffs);
        for deg in 1..=d / 2 {
            for low2 in 0..p.pow(deg) {
                let mut c2 = decode(p, deg, low2).coeffs().to_vec();
                c2.resize(deg as usize, 0);
                c2.push(1);
                let g = Poly::from_coeffs(p, c2);
                if f.divrem(&g).1.is_zero() {
                    continue 'candidates;
                }
            }
        }
        return f;
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl ExtField {
    pub fn new(p: u32, d: u32) -> Result<Self, LinalgError> {
        if !is_prime(p) || d == 0 {
            return Err(LinalgError::UnsupportedField(format!("GF({p}^{d})")));
        }
        let size = p
            .checked_pow(d)
            .filter(|&s| s <= MAX_EXT_SIZE)
            .ok_or_else(|| LinalgError::UnsupportedField(format!("GF({p}^{d}) too large")))?;
        let modulus = first_irreducible(p, d);
        let n = size as usize;
        let mut mul = vec![0u16; n * n];
        for a in 0..size {
            let pa = decode(p, d, a);
            for b in a..size {
                let r = pa.mul(&decode(p, d, b)).divrem(&modulus).1;
                let e = encode(p, &r) as u16;
                mul[a as usize * n + b as usize] = e;
                mul[b as usize * n + a as usize] = e;
            }
        }
        let mut inv = vec![0u16; n];
        for a in 1..n {
            inv[a] = (1..n).find(|&b| mul[a * n + b] == 1).expect("field element invertible") as u16;
        }
        Ok(ExtField { p, d, modulus, size, mul, inv })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b, mut out, mut scale) = (a, b, 0, 1);
        for _ in 0..self.d {
            out += ((a % self.p + b % self.p) % self.p) * scale;
            a /= self.p;
            b /= self.p;
            scale *= self.p;
        }
        out
    }

    fn neg(&self, a: u32) -> u32 {
        let (mut a, mut out, mut scale) = (a, 0, 1);
        for _ in 0..self.d {
            out += ((self.p - a % self.p) % self.p) * scale;
            a /= self.p;
            scale *= self.p;
        }
        out
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.size + b) as usize] as u32
    }
}

/// A coefficient field.
#[derive(Clone, PartialEq, Eq)]
pub enum Field {
    /// F_p.
    Prime(u32),
    /// F_{p^d}, d >= 2.
    Ext(Arc<ExtField>),
    /// The rationals.
    Rational,
    /// F_p(t).
    RatFunc(u32),
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "F_{p}"),
            Field::Ext(e) => write!(f, "F_{}^{}", e.p, e.d),
            Field::Rational => write!(f, "Q"),
            Field::RatFunc(p) => write!(f, "F_{p}(t)"),
        }
    }
}

/// A field element. Its meaning depends on the [`Field`] it is used with.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    /// Element of a finite field, by integer encoding.
    Fin(u32),
    /// Rational number.
    Rat(BigRational),
    /// Rational function in `t`.
    Fun(RatFunc),
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Fin(x) => write!(f, "{x}"),
            Scalar::Rat(r) => write!(f, "{r}"),
            Scalar::Fun(r) => write!(f, "{r}"),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Field {
    /// Field from a characteristic (0 for the rationals) and degree.
    pub fn from_char(ell: u32, degree: u32) -> Result<Field, LinalgError> {
        match (ell, degree) {
            (0, 1) => Ok(Field::Rational),
            (0, _) => Err(LinalgError::UnsupportedField("extension of Q".into())),
            (p, 1) if is_prime(p) => Ok(Field::Prime(p)),
            (p, d) => Ok(Field::Ext(Arc::new(ExtField::new(p, d)?))),
        }
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Prime(p) | Field::RatFunc(p) => *p,
            Field::Ext(e) => e.p,
            Field::Rational => 0,
        }
    }

    /// Number of elements, `None` if infinite.
    pub fn size(&self) -> Option<u32> {
        match self {
            Field::Prime(p) => Some(*p),
            Field::Ext(e) => Some(e.size),
            _ => None,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Prime(_) | Field::Ext(_) => Scalar::Fin(0),
            Field::Rational => Scalar::Rat(BigRational::zero()),
            Field::RatFunc(p) => Scalar::Fun(RatFunc::zero(*p)),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    /// Image of an integer.
    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Prime(p) => Scalar::Fin(n.rem_euclid(*p as i64) as u32),
            Field::Ext(e) => Scalar::Fin(n.rem_euclid(e.p as i64) as u32),
            Field::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            Field::RatFunc(p) => Scalar::Fun(RatFunc::constant(*p, n)),
        }
    }

    /// Whether `s` is a valid element of this field.
    pub fn contains(&self, s: &Scalar) -> bool {
        match (self, s) {
            (Field::Prime(p), Scalar::Fin(x)) => x < p,
            (Field::Ext(e), Scalar::Fin(x)) => *x < e.size,
            (Field::Rational, Scalar::Rat(_)) => true,
            (Field::RatFunc(p), Scalar::Fun(f)) => f.modulus() == *p,
            _ => false,
        }
    }

    pub fn is_zero(&self, s: &Scalar) -> bool {
        match s {
            Scalar::Fin(x) => *x == 0,
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fun(f) => f.is_zero(),
        }
    }

    pub fn is_one(&self, s: &Scalar) -> bool {
        match s {
            Scalar::Fin(x) => *x == 1,
            Scalar::Rat(r) => r.is_one(),
            Scalar::Fun(f) => f.is_one(),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Prime(p), Scalar::Fin(x), Scalar::Fin(y)) => Scalar::Fin((x + y) % p),
            (Field::Ext(e), Scalar::Fin(x), Scalar::Fin(y)) => Scalar::Fin(e.add(*x, *y)),
            (Field::Rational, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (Field::RatFunc(_), Scalar::Fun(x), Scalar::Fun(y)) => Scalar::Fun(x.add(y)),
            _ => panic!("scalar {a:?} or {b:?} not in {self}"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (Field::Prime(p), Scalar::Fin(x)) => Scalar::Fin((p - x) % p),
            (Field::Ext(e), Scalar::Fin(x)) => Scalar::Fin(e.neg(*x)),
            (Field::Rational, Scalar::Rat(x)) => Scalar::Rat(-x),
            (Field::RatFunc(_), Scalar::Fun(x)) => Scalar::Fun(x.neg()),
            _ => panic!("scalar {a:?} not in {self}"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Prime(p), Scalar::Fin(x), Scalar::Fin(y)) => {
                Scalar::Fin(((*x as u64 * *y as u64) % *p as u64) as u32)
            }
            (Field::Ext(e), Scalar::Fin(x), Scalar::Fin(y)) => Scalar::Fin(e.mul(*x, *y)),
            (Field::Rational, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (Field::RatFunc(_), Scalar::Fun(x), Scalar::Fun(y)) => Scalar::Fun(x.mul(y)),
            _ => panic!("scalar {a:?} or {b:?} not in {self}"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar, LinalgError> {
        if self.is_zero(a) {
            return Err(LinalgError::DivisionByZero);
        }
        Ok(match (self, a) {
            (Field::Prime(p), Scalar::Fin(x)) => Scalar::Fin(inv_mod(*x, *p)),
            (Field::Ext(e), Scalar::Fin(x)) => Scalar::Fin(e.inv[*x as usize] as u32),
            (Field::Rational, Scalar::Rat(x)) => Scalar::Rat(x.recip()),
            (Field::RatFunc(_), Scalar::Fun(x)) => Scalar::Fun(x.inv().expect("nonzero")),
            _ => return Err(LinalgError::MixedFields),
        })
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar, LinalgError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// `a^e` for any integer `e` (negative exponents need `a != 0`).
    pub fn pow(&self, a: &Scalar, e: i64) -> Result<Scalar, LinalgError> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = self.one();
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            k >>= 1;
        }
        Ok(acc)
    }

    /// Multiplicative order of a nonzero element of a finite field, or of
    /// +-1 in the rationals; `None` when infinite.
    pub fn order(&self, a: &Scalar) -> Option<u32> {
        if self.is_zero(a) {
            return None;
        }
        match self {
            Field::Prime(_) | Field::Ext(_) => {
                let mut x = a.clone();
                let mut k = 1;
                while !self.is_one(&x) {
                    x = self.mul(&x, a);
                    k += 1;
                }
                Some(k)
            }
            Field::Rational => match a {
                Scalar::Rat(r) if r.is_one() => Some(1),
                Scalar::Rat(r) if (-r).is_one() => Some(2),
                _ => None,
            },
            Field::RatFunc(_) => None,
        }
    }

    /// The first element (by encoding) of exact multiplicative order `m`.
    pub fn root_of_unity(&self, m: u32) -> Option<Scalar> {
        match self {
            Field::Prime(_) | Field::Ext(_) => {
                let size = self.size().expect("finite");
                (1..size).map(Scalar::Fin).find(|x| self.order(x) == Some(m))
            }
            Field::Rational => match m {
                1 => Some(self.one()),
                2 => Some(self.from_i64(-1)),
                _ => None,
            },
            Field::RatFunc(p) => {
                let f = Field::Prime(*p);
                f.root_of_unity(m).map(|s| match s {
                    Scalar::Fin(x) => Scalar::Fun(RatFunc::constant(*p, x as i64)),
                    _ => unreachable!(),
                })
            }
        }
    }

    /// Parse an element: an integer encoding for finite fields, `a` or `a/b`
    /// for the rationals.
    pub fn parse(&self, s: &str) -> Result<Scalar, LinalgError> {
        let s = s.trim();
        let bad = || LinalgError::Parse(s.to_string());
        match self {
            Field::Prime(_) | Field::Ext(_) => {
                let v: i64 = s.parse().map_err(|_| bad())?;
                let size = self.size().expect("finite") as i64;
                if matches!(self, Field::Ext(_)) && !(0..size).contains(&v) {
                    return Err(bad());
                }
                Ok(match self {
                    Field::Prime(_) => self.from_i64(v),
                    _ => Scalar::Fin(v as u32),
                })
            }
            Field::Rational => {
                let (n, d) = match s.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (s, "1"),
                };
                let n: BigInt = n.parse().map_err(|_| bad())?;
                let d: BigInt = d.parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(LinalgError::DivisionByZero);
                }
                Ok(Scalar::Rat(BigRational::new(n, d)))
            }
            Field::RatFunc(_) => Err(bad()),
        }
    }

    /// Small nonnegative integer view of a scalar if it has one (used for
    /// reporting).
    pub fn as_small_int(&self, s: &Scalar) -> Option<i64> {
        match s {
            Scalar::Fin(x) => Some(*x as i64),
            Scalar::Rat(r) if r.is_integer() => r.to_integer().to_i64(),
            _ => None,
        }
    }

    /// Sign-normalized rendering used in certificates.
    pub fn render(&self, s: &Scalar) -> String {
        match s {
            Scalar::Rat(r) if r.is_negative() => format!("-{}", -r),
            other => other.to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_arithmetic() {
        let f = Field::from_char(2, 2).unwrap();
        assert_eq!(f.size(), Some(4));
        // every nonzero element has order dividing 3
        for x in 1..4 {
            let o = f.order(&Scalar::Fin(x)).unwrap();
            assert_eq!(3 % o, 0);
        }
        assert!(f.root_of_unity(3).is_some());
        assert!(f.root_of_unity(2).is_none());
    }

    #[test]
    fn division_by_zero_rejected() {
        for f in [Field::Prime(3), Field::Rational, Field::from_char(3, 2).unwrap()] {
            assert!(f.inv(&f.zero()).is_err());
        }
    }

    #[test]
    fn rational_parse() {
        let f = Field::Rational;
        let x = f.parse("-3/6").unwrap();
        assert_eq!(f.mul(&x, &f.from_i64(-2)), f.one());
    }
}
