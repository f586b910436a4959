//! Smooth characters of the diagonal torus trivial on `T^1`, and the
//! matching characters of the antidominant subalgebra.

use std::fmt;

use thiserror::Error;

use crate::linalg::{Field, LinalgError, RatFunc, Scalar};
use crate::weyl::Coweight;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharError {
    #[error("malformed character spec {0:?}")]
    Spec(String),
    #[error("expected {expected} entries, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("unramified parameter must be nonzero")]
    ZeroParameter,
    #[error("no element of order {0} in the coefficient field")]
    NoRootOfUnity(u32),
    #[error("coweight {0:?} is not antidominant")]
    NotAntidominant(Vec<i64>),
    #[error(transparent)]
    Field(#[from] LinalgError),
}

/// Smallest generator of `F_q^x` (`q` prime).
pub fn primitive_root(q: u32) -> u32 {
    if q == 2 {
        return 1;
    }
    (2..q)
        .find(|&g| {
            let mut x = 1u64;
            (1..q - 1).all(|_| {
                x = x * g as u64 % q as u64;
                x != 1
            })
        })
        .expect("prime modulus has a primitive root")
}

/// `chi(diag(a)) = prod z_i^val(a_i) * zeta^(o_i * log_g(ac(a_i)))` where `g`
/// generates `F_q^x` and `zeta` is a fixed element of order `q - 1` in `k`
/// (only needed when some `o_i != 0`).
#[derive(Clone, PartialEq, Eq)]
pub struct PrincipalSeriesChar {
    field: Field,
    q: u32,
    unramified: Vec<Scalar>,
    tame: Vec<u32>,
    zeta: Scalar,
    dlog: Vec<u32>,
}

impl fmt::Debug for PrincipalSeriesChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self.spec_string(), self.field)
    }
}

impl PrincipalSeriesChar {
    pub fn new(field: &Field, q: u32, unramified: Vec<Scalar>, tame: Vec<u32>) -> Result<Self, CharError> {
        let n = unramified.len();
        if tame.len() != n {
            return Err(CharError::Arity { expected: n, got: tame.len() });
        }
        for z in &unramified {
            if !field.contains(z) {
                return Err(CharError::Field(LinalgError::MixedFields));
            }
            if field.is_zero(z) {
                return Err(CharError::ZeroParameter);
            }
        }
        let tame: Vec<u32> = tame.into_iter().map(|o| o % (q - 1)).collect();
        let zeta = if tame.iter().all(|&o| o == 0) {
            field.one()
        } else {
            field.root_of_unity(q - 1).ok_or(CharError::NoRootOfUnity(q - 1))?
        };
        let g = primitive_root(q);
        let mut dlog = vec![0u32; q as usize];
        let mut x = 1u32;
        for e in 0..q - 1 {
            dlog[x as usize] = e;
            x = ((x as u64 * g as u64) % q as u64) as u32;
        }
        Ok(PrincipalSeriesChar { field: field.clone(), q, unramified, tame, zeta, dlog })
    }

    pub fn trivial(field: &Field, n: usize, q: u32) -> Self {
        Self::new(field, q, vec![field.one(); n], vec![0; n]).expect("trivial character")
    }

    /// Parses `"z=[v1,...,vn];tame=[o1,...,on]"`. Either part may be
    /// omitted (defaults: all ones, all zeros); `"trivial"` is accepted.
    pub fn parse(spec: &str, field: &Field, n: usize, q: u32) -> Result<Self, CharError> {
        let spec = spec.trim();
        if spec.is_empty() || spec == "trivial" {
            return Ok(Self::trivial(field, n, q));
        }
        let mut z = vec![field.one(); n];
        let mut tame = vec![0u32; n];
        for part in spec.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, val) = part.split_once('=').ok_or_else(|| CharError::Spec(spec.into()))?;
            let val = val.trim();
            let inner = val
                .strip_prefix('[')
                .and_then(|v| v.strip_suffix(']'))
                .ok_or_else(|| CharError::Spec(spec.into()))?;
            let items: Vec<&str> = inner.split(',').map(str::trim).collect();
            if items.len() != n {
                return Err(CharError::Arity { expected: n, got: items.len() });
            }
            match key.trim() {
                "z" => {
                    z = items.iter().map(|s| field.parse(s)).collect::<Result<_, _>>()?;
                }
                "tame" => {
                    tame = items
                        .iter()
                        .map(|s| s.parse::<i64>().map(|o| o.rem_euclid((q - 1) as i64) as u32))
                        .collect::<Result<_, _>>()
                        .map_err(|_| CharError::Spec(spec.into()))?;
                }
                _ => return Err(CharError::Spec(spec.into())),
            }
        }
        Self::new(field, q, z, tame)
    }

    pub fn spec_string(&self) -> String {
        let z: Vec<String> = self.unramified.iter().map(|s| self.field.render(s)).collect();
        let t: Vec<String> = self.tame.iter().map(|o| o.to_string()).collect();
        format!("z=[{}];tame=[{}]", z.join(","), t.join(","))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.unramified.len()
    }

    pub fn unramified(&self) -> &[Scalar] {
        &self.unramified
    }

    pub fn tame(&self) -> &[u32] {
        &self.tame
    }

    pub fn is_trivial(&self) -> bool {
        self.tame.iter().all(|&o| o == 0) && self.unramified.iter().all(|z| self.field.is_one(z))
    }

    pub fn has_tame_part(&self) -> bool {
        self.tame.iter().any(|&o| o != 0)
    }

    /// Tame character in slot `i` at `c` in `F_q^x`.
    pub fn psi(&self, i: usize, c: u32) -> Scalar {
        let e = self.tame[i] as i64 * self.dlog[(c % self.q) as usize] as i64;
        self.field.pow(&self.zeta, e).expect("zeta is nonzero")
    }

    /// Character on `T^0 / T^1` given residues of the diagonal entries.
    pub fn on_residues(&self, res: &[u32]) -> Scalar {
        let f = &self.field;
        res.iter().enumerate().fold(f.one(), |acc, (i, &c)| f.mul(&acc, &self.psi(i, c)))
    }

    /// `chi(diag(a))` for nonzero rational functions `a_i`.
    pub fn on_diagonal(&self, a: &[RatFunc]) -> Scalar {
        let f = &self.field;
        let mut acc = f.one();
        for (i, x) in a.iter().enumerate() {
            let v = x.val().expect("diagonal entries are nonzero");
            acc = f.mul(&acc, &f.pow(&self.unramified[i], v).expect("nonzero"));
            acc = f.mul(&acc, &self.psi(i, x.angular_component()));
        }
        acc
    }

    /// `chi` on the canonical lift `diag(c_i t^(-lambda_i))` of `e^(lambda, c)`.
    pub fn on_lift(&self, c: &Coweight) -> Scalar {
        let f = &self.field;
        let mut acc = f.one();
        for i in 0..self.n() {
            acc = f.mul(&acc, &f.pow(&self.unramified[i], -c.lambda[i]).expect("nonzero"));
            acc = f.mul(&acc, &self.psi(i, c.torus[i]));
        }
        acc
    }
}

fn inv_mod(a: u32, q: u32) -> u32 {
    crate::linalg::poly::inv_mod(a, q)
}

fn neg_coweight(c: &Coweight, q: u32) -> Coweight {
    Coweight::new(c.lambda.iter().map(|l| -l).collect(), c.torus.iter().map(|&x| inv_mod(x, q)).collect())
}

/// A regular character of the antidominant subalgebra, given by its values
/// on the basis elements `tau_(e^lambda)`.
#[derive(Clone, Debug)]
pub struct AntiCharacter {
    chi: PrincipalSeriesChar,
}

impl AntiCharacter {
    pub fn field(&self) -> &Field {
        self.chi.field()
    }

    pub fn q(&self) -> u32 {
        self.chi.q()
    }

    /// Value on `tau_(e^c)` for antidominant `c`.
    pub fn value(&self, c: &Coweight) -> Result<Scalar, CharError> {
        if !c.is_antidominant() {
            return Err(CharError::NotAntidominant(c.lambda.clone()));
        }
        Ok(self.extended_value(c))
    }

    /// The same formula on an arbitrary coweight (the unique extension to
    /// the group generated by the antidominant ones).
    pub fn extended_value(&self, c: &Coweight) -> Scalar {
        self.chi.on_lift(&neg_coweight(c, self.q()))
    }
}

/// `chibar(tau_(e^lambda)) = chi(lift of e^(-lambda))`.
pub fn build_anti_character(chi: &PrincipalSeriesChar) -> AntiCharacter {
    AntiCharacter { chi: chi.clone() }
}

/// Writes `c = c1 - c2` with `c1`, `c2` antidominant; the torus part goes
/// into `c1` and `c2` is a multiple of `(0, 1, ..., n-1)`.
pub fn antidominant_difference(c: &Coweight) -> (Coweight, Coweight) {
    let n = c.lambda.len();
    let gap = c.lambda.windows(2).map(|w| (w[0] - w[1]).max(0)).max().unwrap_or(0);
    let c2 = Coweight::plain((0..n as i64).map(|i| i * gap).collect());
    let c1 = Coweight::new(
        c.lambda.iter().zip(&c2.lambda).map(|(a, b)| a + b).collect(),
        c.torus.clone(),
    );
    debug_assert!(c1.is_antidominant() && c2.is_antidominant());
    (c1, c2)
}

/// The coweight `c` with `diag(a)` in `T^1 * lift(e^c)`.
pub fn locate_in_lifts(a: &[RatFunc]) -> Coweight {
    Coweight::new(
        a.iter().map(|x| -x.val().expect("nonzero")).collect(),
        a.iter().map(|x| x.angular_component()).collect(),
    )
}

/// Inverse of [`build_anti_character`]: evaluates the torus character
/// attached to `psi` at `diag(a)`. The element `diag(a)` is located in
/// `T^1 * lift(e^(-c))`, `c` is split as a difference `c1 - c2` of
/// antidominant coweights, and `psi(c1) / psi(c2)` is returned.
pub fn torus_character_from_anti<F>(
    psi: F,
    field: &Field,
    q: u32,
    a: &[RatFunc],
) -> Result<Scalar, CharError>
where
    F: Fn(&Coweight) -> Result<Scalar, CharError>,
{
    let c = neg_coweight(&locate_in_lifts(a), q);
    let (c1, c2) = antidominant_difference(&c);
    Ok(field.div(&psi(&c1)?, &psi(&c2)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Poly;

    #[test]
    fn parse_and_render() {
        let f = Field::Rational;
        let chi = PrincipalSeriesChar::parse("z=[2,-1/3];tame=[1,0]", &f, 2, 3).unwrap();
        assert_eq!(chi.spec_string(), "z=[2,-1/3];tame=[1,0]");
        assert!(PrincipalSeriesChar::parse("z=[0,1]", &f, 2, 3).is_err());
        assert!(PrincipalSeriesChar::parse("z=[1]", &f, 2, 3).is_err());
        // no element of order 2 in characteristic 2
        assert!(PrincipalSeriesChar::parse("tame=[1,0]", &Field::Prime(2), 2, 3).is_err());
    }

    #[test]
    fn trivial_on_t1_and_multiplicative() {
        let f = Field::Prime(5);
        let q = 3;
        let chi = PrincipalSeriesChar::parse("z=[2,3];tame=[1,1]", &f, 2, q).unwrap();
        let one_plus_t = RatFunc::from_poly(Poly::from_coeffs(q, vec![1, 1]));
        assert!(f.is_one(&chi.on_diagonal(&[one_plus_t.clone(), one_plus_t])));
        let a = [RatFunc::monomial(q, 2, -1), RatFunc::monomial(q, 1, 2)];
        let b = [RatFunc::monomial(q, 2, 3), RatFunc::monomial(q, 2, 0)];
        let ab: Vec<RatFunc> = a.iter().zip(&b).map(|(x, y)| x.mul(y)).collect();
        assert_eq!(chi.on_diagonal(&ab), f.mul(&chi.on_diagonal(&a), &chi.on_diagonal(&b)));
    }

    #[test]
    fn anti_character_round_trip() {
        let f = Field::Rational;
        let q = 3;
        let chi = PrincipalSeriesChar::parse("z=[2,-3];tame=[1,0]", &f, 2, q).unwrap();
        let psi = build_anti_character(&chi);
        for (l, c) in [(vec![1, -2], vec![2, 1]), (vec![0, 0], vec![1, 2]), (vec![-3, 4], vec![2, 2])] {
            let a: Vec<RatFunc> =
                l.iter().zip(&c).map(|(&k, &x)| RatFunc::monomial(q, x as i64, k)).collect();
            let back = torus_character_from_anti(|c| psi.value(c), &f, q, &a).unwrap();
            assert_eq!(back, chi.on_diagonal(&a));
        }
    }
}
