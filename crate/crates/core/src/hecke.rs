//! The pro-p Iwahori-Hecke algebra in the basis `tau_w`, multiplied either
//! through the braid and quadratic relations or, independently, by counting
//! cosets in the matrix model.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::character::AntiCharacter;
use crate::group::{bruhat_iwahori_class, CosetSource, DirectCosets, GroupError, GroupMat};
use crate::linalg::{Field, Scalar, SparseEchelon};
use crate::weyl::{elements_up_to, Coweight, ExtendedWeylElt};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeckeError {
    #[error("length {0} exceeds the budget {1}")]
    OverBudget(usize, usize),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("operands live in different algebras")]
    Mismatch,
}

/// Finite combination `sum c_w tau_w` with nonzero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct HeckeElt {
    field: Field,
    n: usize,
    q: u32,
    terms: BTreeMap<ExtendedWeylElt, Scalar>,
}

impl fmt::Debug for HeckeElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(w, c)| format!("{}*T{}", self.field.render(c), w)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl HeckeElt {
    pub fn zero(field: &Field, n: usize, q: u32) -> Self {
        HeckeElt { field: field.clone(), n, q, terms: BTreeMap::new() }
    }

    /// The basis element `tau_w`.
    pub fn basis(field: &Field, w: &ExtendedWeylElt) -> Self {
        let mut h = Self::zero(field, w.n(), w.q);
        h.terms.insert(w.clone(), field.one());
        h
    }

    pub fn unit(field: &Field, n: usize, q: u32) -> Self {
        Self::basis(field, &ExtendedWeylElt::identity(n, q))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn terms(&self) -> &BTreeMap<ExtendedWeylElt, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &ExtendedWeylElt) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Adds `c * tau_w`.
    pub fn add_term(&mut self, w: ExtendedWeylElt, c: &Scalar) {
        if self.field.is_zero(c) {
            return;
        }
        let v = self.field.add(&self.coeff(&w), c);
        if self.field.is_zero(&v) {
            self.terms.remove(&w);
        } else {
            self.terms.insert(w, v);
        }
    }

    pub fn add(&self, o: &HeckeElt) -> HeckeElt {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> HeckeElt {
        let mut out = Self::zero(&self.field, self.n, self.q);
        for (w, x) in &self.terms {
            out.add_term(w.clone(), &self.field.mul(x, c));
        }
        out
    }

    pub fn sub(&self, o: &HeckeElt) -> HeckeElt {
        self.add(&o.scale(&self.field.from_i64(-1)))
    }

    /// Largest length in the support.
    pub fn max_length(&self) -> usize {
        self.terms.keys().map(|w| w.length()).max().unwrap_or(0)
    }

    /// Whether the support consists of translations by antidominant
    /// coweights, i.e. the element lies in the antidominant subalgebra.
    pub fn is_antidominant_supported(&self) -> bool {
        self.terms.keys().all(|w| w.is_translation() && w.coweight.is_antidominant())
    }
}

/// The torus elements appearing in the quadratic relation of `s_i`: entries
/// `a` and `b` with `a * b = -1` in the two positions swapped by `s_i`,
/// ones elsewhere.
pub fn quadratic_torus_set(n: usize, q: u32, i: usize) -> Vec<ExtendedWeylElt> {
    let (x, y) = if i == 0 { (0, n - 1) } else { (i - 1, i) };
    (1..q)
        .map(|a| {
            let mut t = vec![1u32; n];
            t[x] = a;
            t[y] = (q - crate::linalg::poly::inv_mod(a, q)) % q;
            ExtendedWeylElt::torus(q, t)
        })
        .collect()
}

/// `tau_v * tau_(s_i)`.
fn mul_by_simple(field: &Field, v: &ExtendedWeylElt, i: usize) -> HeckeElt {
    let n = v.n();
    let q = v.q;
    let s = ExtendedWeylElt::simple(n, q, i);
    let vs = v.mul(&s);
    let mut out = HeckeElt::zero(field, n, q);
    if vs.length() > v.length() {
        out.add_term(vs, &field.one());
        return out;
    }
    // v = v' s with v' = vs, and tau_s^2 = q tau_(s^2) + sum_(h in T_s) tau_(h s)
    out.add_term(vs.mul(&s).mul(&s), &field.from_i64(q as i64));
    for h in quadratic_torus_set(n, q, i) {
        out.add_term(vs.mul(&h).mul(&s), &field.one());
    }
    out
}

/// `tau_x * tau_y` through the braid and quadratic relations.
pub fn tau_basis_product(field: &Field, x: &ExtendedWeylElt, y: &ExtendedWeylElt) -> HeckeElt {
    let (omega, word) = y.reduced_word();
    let mut cur = HeckeElt::basis(field, &x.mul(&omega));
    for &i in &word {
        let mut next = HeckeElt::zero(field, x.n(), x.q);
        for (v, c) in &cur.terms {
            next = next.add(&mul_by_simple(field, v, i).scale(c));
        }
        cur = next;
    }
    cur
}

/// Product in the algebra; every input term must have length at most
/// `budget`.
pub fn tau_multiply(a: &HeckeElt, b: &HeckeElt, budget: usize) -> Result<HeckeElt, HeckeError> {
    if a.field != b.field || a.n != b.n || a.q != b.q {
        return Err(HeckeError::Mismatch);
    }
    for h in [a, b] {
        let l = h.max_length();
        if l > budget {
            return Err(HeckeError::OverBudget(l, budget));
        }
    }
    let f = &a.field;
    let mut out = HeckeElt::zero(f, a.n, a.q);
    for (x, c) in &a.terms {
        for (y, d) in &b.terms {
            out = out.add(&tau_basis_product(f, x, y).scale(&f.mul(c, d)));
        }
    }
    Ok(out)
}

/// Structure constants of `tau_w * tau_w2` by coset counting:
/// `c_v = #{x in I w I / I : x^-1 v in I w2 I}`, reduced into `field`.
pub fn convolve_oracle(
    field: &Field,
    w: &ExtendedWeylElt,
    w2: &ExtendedWeylElt,
    budget_bits: u32,
) -> Result<HeckeElt, HeckeError> {
    convolve_oracle_with(field, w, w2, budget_bits, &DirectCosets)
}

/// [`convolve_oracle`] with coset representatives from `source`.
pub fn convolve_oracle_with(
    field: &Field,
    w: &ExtendedWeylElt,
    w2: &ExtendedWeylElt,
    budget_bits: u32,
    source: &dyn CosetSource,
) -> Result<HeckeElt, HeckeError> {
    let xs = source.reps(w, budget_bits)?;
    let ys = source.reps(w2, budget_bits)?;
    let mut candidates = BTreeSet::new();
    for x in &xs {
        for y in &ys {
            candidates.insert(bruhat_iwahori_class(&x.mul(y)));
        }
    }
    let x_invs: Vec<GroupMat> = xs.iter().map(|x| x.inverse()).collect();
    let mut out = HeckeElt::zero(field, w.n(), w.q);
    for v in candidates {
        let lv = GroupMat::lift(&v);
        let count = x_invs.iter().filter(|xi| bruhat_iwahori_class(&xi.mul(&lv)) == *w2).count();
        out.add_term(v, &field.from_i64(count as i64));
    }
    Ok(out)
}

/// Truncation of the fiber `chibar (x)_(A_anti) H` to the elements of
/// length at most `budget`.
///
/// Torus and central factors are moved into scalars on the left, so the
/// spanning set is the window of [`elements_up_to`]. Relations
/// `tau_(e^lambda) tau_w - chibar(tau_(e^lambda)) tau_w` are kept when
/// every term normalizes into the window.
#[derive(Clone, Debug)]
pub struct TruncatedFiber {
    anti: AntiCharacter,
    n: usize,
    elements: Vec<ExtendedWeylElt>,
    index: HashMap<ExtendedWeylElt, usize>,
    relations: SparseEchelon,
}

impl TruncatedFiber {
    pub fn new(anti: &AntiCharacter, n: usize, q: u32, budget: usize) -> Result<Self, HeckeError> {
        Self::with_bounds(anti, n, q, budget, 2 * budget)
    }

    /// Window of length `budget`, relations from `tau_(e^lambda)` with
    /// `l(e^lambda) <= lambda_bound`.
    pub fn with_bounds(
        anti: &AntiCharacter,
        n: usize,
        q: u32,
        budget: usize,
        lambda_bound: usize,
    ) -> Result<Self, HeckeError> {
        let field = anti.field().clone();
        let elements = elements_up_to(n, q, budget);
        let index = elements.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let mut fib = TruncatedFiber {
            anti: anti.clone(),
            n,
            elements,
            index,
            relations: SparseEchelon::new(&field),
        };
        // antidominant lambda with lambda_0 = 0; the center is already a scalar
        let mut lambdas = vec![vec![0i64]];
        for _ in 1..n {
            lambdas = lambdas
                .into_iter()
                .flat_map(|l| {
                    let last = *l.last().expect("nonempty");
                    (last..=lambda_bound as i64).map(move |x| {
                        let mut l = l.clone();
                        l.push(x);
                        l
                    })
                })
                .collect();
        }
        for lambda in lambdas {
            let c = Coweight::plain(lambda);
            let t = ExtendedWeylElt::translation(q, c.clone());
            let lt = t.length();
            if lt == 0 || lt > lambda_bound {
                continue;
            }
            let val = anti.value(&c).map_err(|_| HeckeError::Mismatch)?;
            for (i, w) in fib.elements.clone().iter().enumerate() {
                if lt > budget + w.length() {
                    continue;
                }
                let Some(mut row) = fib.normalize(&tau_basis_product(&field, &t, w)) else {
                    continue;
                };
                let e = row.entry(i).or_insert_with(|| field.zero());
                *e = field.sub(e, &val);
                if field.is_zero(e) {
                    row.remove(&i);
                }
                if !row.is_empty() {
                    fib.relations.insert(&row);
                }
            }
        }
        Ok(fib)
    }

    pub fn elements(&self) -> &[ExtendedWeylElt] {
        &self.elements
    }

    pub fn relation_rank(&self) -> usize {
        self.relations.rank()
    }

    /// Image of `h` in the span of the window, or `None` when some term
    /// falls outside it.
    pub fn normalize(&self, h: &HeckeElt) -> Option<BTreeMap<usize, Scalar>> {
        let f = self.anti.field();
        let mut row = BTreeMap::new();
        for (v, c) in h.terms() {
            let t = v.coweight.torus.clone();
            let (k, rep) = v.without_torus().split_center();
            let idx = *self.index.get(&rep)?;
            let s = f.mul(c, &self.anti.extended_value(&Coweight::new(vec![0; self.n], t)));
            let s = f.mul(&s, &self.anti.extended_value(&Coweight::plain(vec![k; self.n])));
            let e: &mut Scalar = row.entry(idx).or_insert_with(|| f.zero());
            *e = f.add(e, &s);
        }
        row.retain(|_, x| !f.is_zero(x));
        Some(row)
    }

    /// `rank(relations + rows) - rank(relations)`.
    pub fn quotient_rank(&self, rows: &[BTreeMap<usize, Scalar>]) -> usize {
        let mut e = self.relations.clone();
        let base = e.rank();
        for r in rows {
            e.insert(r);
        }
        e.rank() - base
    }

    /// Dimension of the whole truncated quotient.
    pub fn dimension(&self) -> usize {
        self.elements.len() - self.relations.rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::{elements_with_torus_up_to, Coweight};

    #[test]
    fn unit_and_antidominant_additivity() {
        let f = Field::Rational;
        let q = 3;
        let l1 = ExtendedWeylElt::translation(q, Coweight::new(vec![0, 1], vec![2, 1]));
        let l2 = ExtendedWeylElt::translation(q, Coweight::plain(vec![-1, 2]));
        let p = tau_basis_product(&f, &l1, &l2);
        assert_eq!(p, HeckeElt::basis(&f, &l1.mul(&l2)));
        let one = HeckeElt::unit(&f, 2, q);
        let x = HeckeElt::basis(&f, &l2);
        assert_eq!(tau_multiply(&one, &x, 8).unwrap(), x);
    }

    #[test]
    fn quadratic_relation_matches_oracle_gl2() {
        for (q, f) in [(2, Field::Prime(2)), (3, Field::Rational), (3, Field::Prime(3))] {
            for i in 0..2 {
                let s = ExtendedWeylElt::simple(2, q, i);
                let a = tau_basis_product(&f, &s, &s);
                let b = convolve_oracle(&f, &s, &s, 16).unwrap();
                assert_eq!(a, b, "q={q} s_{i}");
            }
        }
    }

    #[test]
    fn products_match_oracle_gl2_with_torus() {
        let q = 3;
        let f = Field::Prime(3);
        let elts = elements_with_torus_up_to(2, q, 2);
        for x in &elts {
            for y in &elts {
                assert_eq!(
                    tau_basis_product(&f, x, y),
                    convolve_oracle(&f, x, y, 16).unwrap(),
                    "{x} * {y}"
                );
            }
        }
    }

    #[test]
    fn associative_on_small_words() {
        let q = 3;
        let f = Field::Rational;
        let elts = elements_with_torus_up_to(2, q, 1);
        let b = |w: &ExtendedWeylElt| HeckeElt::basis(&f, w);
        for x in elts.iter().step_by(3) {
            for y in &elts {
                for z in elts.iter().step_by(2) {
                    let l = tau_multiply(&tau_multiply(&b(x), &b(y), 8).unwrap(), &b(z), 8).unwrap();
                    let r = tau_multiply(&b(x), &tau_multiply(&b(y), &b(z), 8).unwrap(), 8).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn small_products_match_oracle_gl3() {
        let q = 2;
        let f = Field::Rational;
        let elts = elements_with_torus_up_to(3, q, 1);
        for x in &elts {
            for y in &elts {
                assert_eq!(
                    tau_basis_product(&f, x, y),
                    convolve_oracle(&f, x, y, 16).unwrap(),
                    "{x} * {y}"
                );
            }
        }
    }
}
