//! `GL_n(F_q(t))` as an exact model of `GL_n(F_q((t)))`: subgroup membership
//! by valuation patterns, Iwasawa and Iwahori-Bruhat decompositions, the
//! Iwahori factorization and coset representatives of `I w I / I`.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::linalg::{ExactMatrix, Field, RatFunc, Scalar};
use crate::weyl::{ApartmentFacet, Coweight, ExtendedWeylElt};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("matrix is singular")]
    Singular,
    #[error("element is not in the pro-p Iwahori subgroup")]
    NotInIwahori,
    #[error("length {len} over budget (q^len = {q}^{len} exceeds 2^{budget})")]
    OverBudget { len: usize, q: u32, budget: u32 },
    #[error("subgroup is not of finite level")]
    NotFiniteLevel,
}

/// Invertible `n x n` matrix over `F_q(t)`, row major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupMat {
    q: u32,
    n: usize,
    e: Vec<RatFunc>,
}

impl fmt::Debug for GroupMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl GroupMat {
    pub fn identity(n: usize, q: u32) -> Self {
        let mut e = vec![RatFunc::zero(q); n * n];
        for i in 0..n {
            e[i * n + i] = RatFunc::one(q);
        }
        GroupMat { q, n, e }
    }

    /// Builds a matrix from entries; fails if singular.
    pub fn from_entries(n: usize, q: u32, e: Vec<RatFunc>) -> Result<Self, GroupError> {
        assert_eq!(e.len(), n * n);
        let g = GroupMat { q, n, e };
        if g.det().is_zero() {
            return Err(GroupError::Singular);
        }
        Ok(g)
    }

    /// Matrix with entries `c * t^k` given as `(c, k)`; `c = 0` gives zero.
    pub fn from_monomials(n: usize, q: u32, rows: &[Vec<(i64, i64)>]) -> Result<Self, GroupError> {
        let e = rows.iter().flatten().map(|&(c, k)| RatFunc::monomial(q, c, k)).collect();
        Self::from_entries(n, q, e)
    }

    /// `diag(d)`.
    pub fn diag(q: u32, d: Vec<RatFunc>) -> Self {
        let n = d.len();
        let mut g = Self::identity(n, q);
        for (i, x) in d.into_iter().enumerate() {
            g.e[i * n + i] = x;
        }
        g
    }

    /// `1 + x E_ij`.
    pub fn elementary(n: usize, q: u32, i: usize, j: usize, x: RatFunc) -> Self {
        let mut g = Self::identity(n, q);
        let v = g.get(i, j).add(&x);
        g.e[i * n + j] = v;
        g
    }

    /// Canonical lift `diag(c_i t^(-lambda_i)) P_sigma`.
    pub fn lift(w: &ExtendedWeylElt) -> Self {
        let n = w.n();
        let q = w.q;
        let mut e = vec![RatFunc::zero(q); n * n];
        for (j, &i) in w.perm.iter().enumerate() {
            e[i * n + j] =
                RatFunc::monomial(q, w.coweight.torus[i] as i64, -w.coweight.lambda[i]);
        }
        GroupMat { q, n, e }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFunc {
        &self.e[i * self.n + j]
    }

    pub fn entries(&self) -> &[RatFunc] {
        &self.e
    }

    fn set(&mut self, i: usize, j: usize, x: RatFunc) {
        self.e[i * self.n + j] = x;
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n, self.q)
    }

    pub fn mul(&self, o: &GroupMat) -> GroupMat {
        let n = self.n;
        let mut e = vec![RatFunc::zero(self.q); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        e[i * n + j] = e[i * n + j].add(&a.mul(b));
                    }
                }
            }
        }
        GroupMat { q: self.q, n, e }
    }

    pub fn det(&self) -> RatFunc {
        let n = self.n;
        let mut a = self.e.clone();
        let mut det = RatFunc::one(self.q);
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r * n + c].is_zero()) else {
                return RatFunc::zero(self.q);
            };
            if p != c {
                for j in 0..n {
                    a.swap(p * n + j, c * n + j);
                }
                det = det.neg();
            }
            let piv = a[c * n + c].clone();
            det = det.mul(&piv);
            let inv = piv.inv().expect("nonzero pivot");
            for r in c + 1..n {
                if a[r * n + c].is_zero() {
                    continue;
                }
                let f = a[r * n + c].mul(&inv);
                for j in c..n {
                    let v = a[r * n + j].sub(&f.mul(&a[c * n + j]));
                    a[r * n + j] = v;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> GroupMat {
        let n = self.n;
        let mut a = self.e.clone();
        let mut b = Self::identity(n, self.q).e;
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r * n + c].is_zero()).expect("invertible");
            if p != c {
                for j in 0..n {
                    a.swap(p * n + j, c * n + j);
                    b.swap(p * n + j, c * n + j);
                }
            }
            let inv = a[c * n + c].inv().expect("nonzero pivot");
            for j in 0..n {
                a[c * n + j] = a[c * n + j].mul(&inv);
                b[c * n + j] = b[c * n + j].mul(&inv);
            }
            for r in 0..n {
                if r == c || a[r * n + c].is_zero() {
                    continue;
                }
                let f = a[r * n + c].clone();
                for j in 0..n {
                    a[r * n + j] = a[r * n + j].sub(&f.mul(&a[c * n + j]));
                    b[r * n + j] = b[r * n + j].sub(&f.mul(&b[c * n + j]));
                }
            }
        }
        GroupMat { q: self.q, n, e: b }
    }

    pub fn conj(&self, h: &GroupMat) -> GroupMat {
        self.mul(h).mul(&self.inverse())
    }

    /// Valuation of entry `(i, j)`, `i64::MAX` for zero.
    pub fn val(&self, i: usize, j: usize) -> i64 {
        self.get(i, j).val_or_max()
    }

    /// Minimal valuation over all entries.
    pub fn min_val(&self) -> i64 {
        self.e.iter().map(|x| x.val_or_max()).min().unwrap_or(i64::MAX)
    }

    pub fn is_integral(&self) -> bool {
        self.e.iter().all(|x| x.is_integral())
    }

    /// The matrix as an [`ExactMatrix`] over `F_q(t)`.
    pub fn to_exact(&self) -> ExactMatrix {
        let f = Field::RatFunc(self.q);
        let rows = (0..self.n)
            .map(|i| (0..self.n).map(|j| Scalar::Fun(self.get(i, j).clone())).collect())
            .collect();
        ExactMatrix::from_rows(&f, rows).expect("entries over F_q(t)")
    }

    /// Reduction of an integral matrix modulo `t^m`: `n*n*m` coefficients.
    pub fn truncate(&self, m: usize) -> Vec<u32> {
        self.e.iter().flat_map(|x| x.truncate(m)).collect()
    }

    /// Integral matrix from truncated coefficients (entries are polynomials).
    pub fn from_truncated(n: usize, q: u32, m: usize, coeffs: &[u32]) -> Self {
        let e = coeffs
            .chunks(m)
            .map(|c| RatFunc::from_poly(crate::linalg::Poly::from_coeffs(q, c.to_vec())))
            .collect();
        GroupMat { q, n, e }
    }
}

/// The subgroups the verifier works with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupSpec {
    K,
    Km(usize),
    Iwahori,
    ProPIwahori,
    IPlus,
    IMinus,
    T0,
    T1,
    B,
    U,
    Uminus,
    B0,
    Center,
    /// `g I_F g^-1`.
    ParahoricProP { facet: ApartmentFacet, translate: GroupMat },
}

impl SubgroupSpec {
    /// `I_F` for a facet of the base chamber.
    pub fn facet(f: &ApartmentFacet, q: u32) -> Self {
        SubgroupSpec::ParahoricProP { facet: f.clone(), translate: GroupMat::identity(f.n, q) }
    }

    /// Level `m` with `K_m` contained in the subgroup, if it is open and
    /// contained in `K`.
    pub fn level(&self) -> Option<usize> {
        match self {
            SubgroupSpec::K | SubgroupSpec::Iwahori | SubgroupSpec::ProPIwahori => Some(1),
            SubgroupSpec::Km(m) => Some((*m).max(1)),
            SubgroupSpec::ParahoricProP { facet, translate } if translate.is_identity() => {
                if facet.contains_base_vertex() {
                    Some(1)
                } else {
                    Some(2)
                }
            }
            _ => None,
        }
    }
}

fn unit_residue_is_one(x: &RatFunc) -> bool {
    x.val() == Some(0) && x.angular_component() == 1
}

fn in_k(g: &GroupMat) -> bool {
    g.is_integral() && g.det().val() == Some(0)
}

fn is_upper(g: &GroupMat) -> bool {
    (0..g.n).all(|i| (0..i).all(|j| g.get(i, j).is_zero()))
}

fn is_lower(g: &GroupMat) -> bool {
    (0..g.n).all(|i| (i + 1..g.n).all(|j| g.get(i, j).is_zero()))
}

fn is_diagonal(g: &GroupMat) -> bool {
    is_upper(g) && is_lower(g)
}

fn unit_diagonal(g: &GroupMat) -> bool {
    (0..g.n).all(|i| g.get(i, i).is_one())
}

/// `g` lies in `GL_n(O)` and `g mod t` is block upper unitriangular for the
/// blocks of a facet containing `x_0`.
fn in_standard_facet_group(g: &GroupMat, f: &ApartmentFacet) -> bool {
    if !in_k(g) {
        return false;
    }
    let blocks = f.blocks();
    (0..g.n).all(|i| {
        (0..g.n).all(|j| {
            let x = g.get(i, j);
            if i == j {
                unit_residue_is_one(x)
            } else if blocks[i] == blocks[j] || i > j {
                x.val_or_max() >= 1
            } else {
                true
            }
        })
    })
}

/// Decomposes a facet of the base chamber as `rotation^k` applied to a facet
/// containing `x_0`; returns `(k, base facet)`.
pub fn facet_rotation(f: &ApartmentFacet) -> (usize, ApartmentFacet) {
    let k = *f.vertex_types.iter().next().expect("nonempty");
    (k, f.rotate(f.n - k))
}

/// Lift of `rotation^k`.
pub fn rotation_lift(n: usize, q: u32, k: usize) -> GroupMat {
    GroupMat::lift(&ExtendedWeylElt::rotation(n, q).pow(k as i64))
}

/// Exact membership test.
pub fn is_member(g: &GroupMat, s: &SubgroupSpec) -> bool {
    let n = g.n;
    match s {
        SubgroupSpec::K => in_k(g),
        SubgroupSpec::Km(0) => in_k(g),
        SubgroupSpec::Km(m) => (0..n).all(|i| {
            (0..n).all(|j| {
                let x = if i == j { g.get(i, j).sub(&RatFunc::one(g.q)) } else { g.get(i, j).clone() };
                x.val_or_max() >= *m as i64
            })
        }),
        SubgroupSpec::Iwahori => {
            in_k(g) && (0..n).all(|i| (0..i).all(|j| g.val(i, j) >= 1))
        }
        SubgroupSpec::ProPIwahori => in_standard_facet_group(g, &ApartmentFacet::chamber(n)),
        SubgroupSpec::IPlus => is_upper(g) && unit_diagonal(g) && g.is_integral(),
        SubgroupSpec::IMinus => {
            is_lower(g) && unit_diagonal(g) && (0..n).all(|i| (0..i).all(|j| g.val(i, j) >= 1))
        }
        SubgroupSpec::T0 => is_diagonal(g) && in_k(g),
        SubgroupSpec::T1 => is_diagonal(g) && (0..n).all(|i| unit_residue_is_one(g.get(i, i))),
        SubgroupSpec::B => is_upper(g),
        SubgroupSpec::U => is_upper(g) && unit_diagonal(g),
        SubgroupSpec::Uminus => is_lower(g) && unit_diagonal(g),
        SubgroupSpec::B0 => is_upper(g) && in_k(g),
        SubgroupSpec::Center => {
            is_diagonal(g) && (1..n).all(|i| g.get(i, i) == g.get(0, 0))
        }
        SubgroupSpec::ParahoricProP { facet, translate } => {
            let mut h = g.clone();
            if !translate.is_identity() {
                h = translate.inverse().mul(&h).mul(translate);
            }
            let (k, base) = facet_rotation(facet);
            if k > 0 {
                let w = rotation_lift(n, g.q, k);
                h = w.inverse().mul(&h).mul(&w);
            }
            in_standard_facet_group(&h, &base)
        }
    }
}

/// Generators of `I_F` modulo `K_m` for a facet containing `x_0`: the
/// elementary matrices `1 + t^a E_ij` allowed by the block pattern, for all
/// `a < m`.
pub fn standard_facet_generators(n: usize, q: u32, f: &ApartmentFacet, m: usize) -> Vec<GroupMat> {
    let blocks = f.blocks();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let start = if i < j && blocks[i] != blocks[j] { 0 } else { 1 };
            for a in start..m.max(start + 1) {
                out.push(GroupMat::elementary(n, q, i, j, RatFunc::monomial(q, 1, a as i64)));
            }
        }
    }
    out
}

/// Generators of `I_F` modulo `K_m` for any facet of the base chamber.
pub fn facet_generators(n: usize, q: u32, f: &ApartmentFacet, m: usize) -> Vec<GroupMat> {
    let (k, base) = facet_rotation(f);
    let gens = standard_facet_generators(n, q, &base, m + 1);
    if k == 0 {
        return standard_facet_generators(n, q, &base, m);
    }
    let w = rotation_lift(n, q, k);
    gens.iter().map(|g| w.conj(g)).collect()
}

/// Iwasawa decomposition `g = b * k` with `b` upper triangular, `k` in `K`.
///
/// Column operations over `O` bring `g` to upper triangular form, handling
/// rows from the bottom up and moving the leftmost entry of minimal
/// valuation onto the diagonal.
pub fn iwasawa(g: &GroupMat) -> (GroupMat, GroupMat) {
    let n = g.n;
    let q = g.q;
    let mut b = g.clone();
    for r in (0..n).rev() {
        // columns 0..=r are still free
        let p = (0..=r)
            .filter(|&c| !b.get(r, c).is_zero())
            .min_by_key(|&c| (b.val(r, c), c))
            .expect("invertible");
        if p != r {
            for i in 0..n {
                b.e.swap(i * n + p, i * n + r);
            }
        }
        let piv = b.get(r, r).inv().expect("nonzero");
        for c in 0..r {
            if b.get(r, c).is_zero() {
                continue;
            }
            let f = b.get(r, c).mul(&piv);
            for i in 0..n {
                let v = b.get(i, c).sub(&f.mul(b.get(i, r)));
                b.set(i, c, v);
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            debug_assert!(b.get(i, j).is_zero());
            b.set(i, j, RatFunc::zero(q));
        }
    }
    let k = b.inverse().mul(g);
    (b, k)
}

/// The element `w` of the extended affine Weyl group with `I g I = I w I`.
///
/// Repeatedly picks, among entries of minimal valuation in the remaining
/// rows and columns, the one in the lowest row (leftmost within it), and
/// clears its row and column with operations from `I`.
pub fn bruhat_iwahori_class(g: &GroupMat) -> ExtendedWeylElt {
    let n = g.n;
    let q = g.q;
    let mut a = g.clone();
    let mut rows_left: Vec<bool> = vec![true; n];
    let mut cols_left: Vec<bool> = vec![true; n];
    let mut perm = vec![0usize; n];
    let mut lambda = vec![0i64; n];
    let mut torus = vec![1u32; n];
    for _ in 0..n {
        let mut best: Option<(i64, usize, usize)> = None;
        for i in (0..n).filter(|&i| rows_left[i]) {
            for j in (0..n).filter(|&j| cols_left[j]) {
                let v = a.val(i, j);
                if v == i64::MAX {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bv, bi, bj)) => v < bv || (v == bv && (i > bi || (i == bi && j < bj))),
                };
                if better {
                    best = Some((v, i, j));
                }
            }
        }
        let (v, r, c) = best.expect("invertible");
        let inv = a.get(r, c).inv().expect("nonzero");
        // clear row r with column operations
        for j in (0..n).filter(|&j| j != c && cols_left[j]) {
            if a.get(r, j).is_zero() {
                continue;
            }
            let f = a.get(r, j).mul(&inv);
            for i in 0..n {
                let x = a.get(i, j).sub(&f.mul(a.get(i, c)));
                a.set(i, j, x);
            }
        }
        // clear column c with row operations
        for i in (0..n).filter(|&i| i != r && rows_left[i]) {
            if a.get(i, c).is_zero() {
                continue;
            }
            let f = a.get(i, c).mul(&inv);
            for j in 0..n {
                let x = a.get(i, j).sub(&f.mul(a.get(r, j)));
                a.set(i, j, x);
            }
        }
        rows_left[r] = false;
        cols_left[c] = false;
        perm[c] = r;
        lambda[r] = -v;
        torus[r] = a.get(r, c).angular_component();
    }
    ExtendedWeylElt { q, perm, coweight: Coweight { lambda, torus } }
}

/// Factorization `g = u_plus * t0 * u_minus` of an element of `I`.
pub fn iwahori_factor(g: &GroupMat) -> Result<(GroupMat, GroupMat, GroupMat), GroupError> {
    if !is_member(g, &SubgroupSpec::ProPIwahori) {
        return Err(GroupError::NotInIwahori);
    }
    let n = g.n;
    let q = g.q;
    // peel from the bottom right: g = U D L
    let mut a = g.clone();
    let mut u = GroupMat::identity(n, q);
    for k in (0..n).rev() {
        let inv = a.get(k, k).inv().expect("unit diagonal");
        for i in 0..k {
            if a.get(i, k).is_zero() {
                continue;
            }
            let f = a.get(i, k).mul(&inv);
            u.set(i, k, f.clone());
            for j in 0..n {
                let x = a.get(i, j).sub(&f.mul(a.get(k, j)));
                a.set(i, j, x);
            }
        }
    }
    // a is now lower triangular: a = D L
    let d = GroupMat::diag(q, (0..n).map(|i| a.get(i, i).clone()).collect());
    let l = d.inverse().mul(&a);
    debug_assert_eq!(u.mul(&d).mul(&l), *g);
    Ok((u, d, l))
}

/// Root subgroup element used to build cosets along a reduced word:
/// `1 + c E_(j,j+1)` for `s_j`, `j >= 1`, and `1 + c t E_(n,1)` for `s_0`.
pub fn root_element(n: usize, q: u32, i: usize, c: u32) -> GroupMat {
    if i == 0 {
        GroupMat::elementary(n, q, n - 1, 0, RatFunc::monomial(q, c as i64, 1))
    } else {
        GroupMat::elementary(n, q, i - 1, i, RatFunc::constant(q, c as i64))
    }
}

/// Representatives of `I w I / I` along a given reduced expression
/// `w = omega * s_word`.
pub fn coset_reps_along(w_omega: &ExtendedWeylElt, word: &[usize]) -> Vec<GroupMat> {
    let n = w_omega.n();
    let q = w_omega.q;
    let mut reps = vec![GroupMat::lift(w_omega)];
    for &i in word {
        let s = GroupMat::lift(&ExtendedWeylElt::simple(n, q, i));
        let mut next = Vec::with_capacity(reps.len() * q as usize);
        for x in &reps {
            for c in 0..q {
                next.push(x.mul(&root_element(n, q, i, c)).mul(&s));
            }
        }
        reps = next;
    }
    reps
}

/// Representatives `x_i` with `I w I = disjoint union of x_i I`, exactly
/// `q^l(w)` of them. `budget` bounds `l(w) * log2(q)`.
pub fn coset_reps(w: &ExtendedWeylElt, budget: u32) -> Result<Vec<GroupMat>, GroupError> {
    let len = w.length();
    if (len as f64) * (w.q as f64).log2() > budget as f64 {
        return Err(GroupError::OverBudget { len, q: w.q, budget });
    }
    let (om, word) = w.reduced_word();
    Ok(coset_reps_along(&om, &word))
}

/// Where coset representatives come from: computed directly or through a
/// cache. Implementations must return exactly what [`coset_reps`] returns.
pub trait CosetSource: Send + Sync {
    fn reps(&self, w: &ExtendedWeylElt, budget: u32) -> Result<Vec<GroupMat>, GroupError>;
}

/// Computes every request.
#[derive(Clone, Copy, Debug, Default)]
pub struct DirectCosets;

impl CosetSource for DirectCosets {
    fn reps(&self, w: &ExtendedWeylElt, budget: u32) -> Result<Vec<GroupMat>, GroupError> {
        coset_reps(w, budget)
    }
}

/// Whether `x I = y I`.
pub fn same_right_coset(x: &GroupMat, y: &GroupMat) -> bool {
    is_member(&x.inverse().mul(y), &SubgroupSpec::ProPIwahori)
}

/// Elementary generators of `I^+` and `I^-` that control conjugation by a
/// diagonal matrix: `1 + E_ij` (`i < j`) and `1 + t E_ij` (`i > j`).
pub fn iwahori_unipotent_generators(n: usize, q: u32) -> (Vec<GroupMat>, Vec<GroupMat>) {
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i < j {
                plus.push(GroupMat::elementary(n, q, i, j, RatFunc::one(q)));
            } else if i > j {
                minus.push(GroupMat::elementary(n, q, i, j, RatFunc::t(q)));
            }
        }
    }
    (plus, minus)
}

/// `g I^+ g^-1 ⊆ I^+` and `g^-1 I^- g ⊆ I^-` for the lift `g` of `e^c`.
pub fn contraction_test(c: &Coweight, q: u32) -> bool {
    let n = c.lambda.len();
    let g = GroupMat::lift(&ExtendedWeylElt::translation(q, c.clone()));
    let gi = g.inverse();
    let (plus, minus) = iwahori_unipotent_generators(n, q);
    plus.iter().all(|u| is_member(&g.mul(u).mul(&gi), &SubgroupSpec::IPlus))
        && minus.iter().all(|u| is_member(&gi.mul(u).mul(&g), &SubgroupSpec::IMinus))
}

/// The fixed strongly antidominant element: lift of `e^(0,1,...,n-1)`.
pub fn strongly_antidominant_lift(n: usize, q: u32) -> GroupMat {
    GroupMat::lift(&ExtendedWeylElt::translation(
        q,
        Coweight::plain((0..n as i64).collect()),
    ))
}

/// `t^-m u t^m` lies in `K_(m+1) ∩ U^-` for every elementary generator `u`
/// of `I^-`, with `t` the fixed strongly antidominant element.
pub fn lower_unipotent_contracts(n: usize, q: u32, m: usize) -> bool {
    let t = strongly_antidominant_lift(n, q);
    let tm = (0..m).fold(GroupMat::identity(n, q), |acc, _| acc.mul(&t));
    let tm_inv = tm.inverse();
    let (_, minus) = iwahori_unipotent_generators(n, q);
    minus.iter().all(|u| {
        let x = tm_inv.mul(u).mul(&tm);
        is_member(&x, &SubgroupSpec::Km(m + 1)) && is_member(&x, &SubgroupSpec::Uminus)
    })
}

/// `I_F' ⊆ I_F` whenever `F'` is a face of `F`, for all facets of the base
/// chamber, checked on generators modulo `K_m`.
pub fn facet_groups_nested(n: usize, q: u32, m: usize) -> bool {
    let all = ApartmentFacet::all(n);
    all.iter().all(|f| {
        let spec = SubgroupSpec::facet(f, q);
        all.iter()
            .filter(|g| g.vertex_types.is_subset(&f.vertex_types))
            .all(|g| facet_generators(n, q, g, m).iter().all(|h| is_member(h, &spec)))
    })
}

/// Random polynomial of degree `< deg` with constant term forced to `c0`
/// when given.
fn random_poly<R: Rng>(rng: &mut R, q: u32, deg: usize, c0: Option<u32>) -> RatFunc {
    let mut c: Vec<u32> = (0..deg).map(|_| rng.gen_range(0..q)).collect();
    if let (Some(x), Some(first)) = (c0, c.first_mut()) {
        *first = x;
    }
    RatFunc::from_poly(crate::linalg::Poly::from_coeffs(q, c))
}

/// Random element of `I` with polynomial entries of degree `< deg`,
/// built as a product `u_plus * t0 * u_minus` of random factors.
pub fn random_iwahori<R: Rng>(rng: &mut R, n: usize, q: u32, deg: usize) -> GroupMat {
    let mut up = GroupMat::identity(n, q);
    let mut lo = GroupMat::identity(n, q);
    let mut d = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..n {
            if i < j {
                up.set(i, j, random_poly(rng, q, deg, None));
            } else if i > j {
                lo.set(i, j, random_poly(rng, q, deg + 1, Some(0)));
            }
        }
        d.push(random_poly(rng, q, deg.max(1), Some(1)));
    }
    up.mul(&GroupMat::diag(q, d)).mul(&lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::{elements_with_torus_up_to, integer_box, torus_parts};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn membership_examples() {
        let q = 3;
        let one = GroupMat::identity(2, q);
        for s in [
            SubgroupSpec::K,
            SubgroupSpec::Km(2),
            SubgroupSpec::Iwahori,
            SubgroupSpec::ProPIwahori,
            SubgroupSpec::IPlus,
            SubgroupSpec::IMinus,
            SubgroupSpec::T0,
            SubgroupSpec::T1,
            SubgroupSpec::B,
            SubgroupSpec::U,
            SubgroupSpec::Uminus,
            SubgroupSpec::B0,
            SubgroupSpec::Center,
        ] {
            assert!(is_member(&one, &s), "{s:?}");
        }
        let d = GroupMat::diag(q, vec![RatFunc::from_poly(crate::linalg::Poly::from_coeffs(q, vec![1, 1])), RatFunc::one(q)]);
        assert!(is_member(&d, &SubgroupSpec::T1));
        let d2 = GroupMat::diag(q, vec![RatFunc::constant(q, 2), RatFunc::one(q)]);
        assert!(!is_member(&d2, &SubgroupSpec::T1));
        let l = GroupMat::elementary(2, q, 1, 0, RatFunc::t(q));
        assert!(is_member(&l, &SubgroupSpec::ProPIwahori));
        assert!(is_member(&l, &SubgroupSpec::IMinus));
    }

    #[test]
    fn facet_groups_at_extremes() {
        for n in [2, 3] {
            let q = 2;
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let chamber = SubgroupSpec::facet(&ApartmentFacet::chamber(n), q);
            let vertex = SubgroupSpec::facet(&ApartmentFacet::base_vertex(n), q);
            for _ in 0..20 {
                let g = random_iwahori(&mut rng, n, q, 2);
                assert_eq!(is_member(&g, &chamber), is_member(&g, &SubgroupSpec::ProPIwahori));
                assert_eq!(is_member(&g, &vertex), is_member(&g, &SubgroupSpec::Km(1)));
            }
        }
    }

    #[test]
    fn iwasawa_reconstructs() {
        let q = 3;
        let g = GroupMat::from_monomials(2, q, &[vec![(0, 0), (1, 0)], vec![(1, 0), (0, 0)]]).unwrap();
        let (b, k) = iwasawa(&g);
        assert!(is_member(&b, &SubgroupSpec::B));
        assert!(is_member(&k, &SubgroupSpec::K));
        assert_eq!(b.mul(&k), g);
        let d = GroupMat::from_monomials(2, q, &[vec![(1, -1), (0, 0)], vec![(0, 0), (1, 0)]]).unwrap();
        let (b, k) = iwasawa(&d);
        assert_eq!(b, d);
        assert!(k.is_identity());
    }

    #[test]
    fn class_of_lifts_and_perturbations() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [2, 3] {
            for q in [2, 3] {
                for w in elements_with_torus_up_to(n, q, 2) {
                    let g = GroupMat::lift(&w);
                    assert_eq!(bruhat_iwahori_class(&g), w);
                    let u = random_iwahori(&mut rng, n, q, 2);
                    let v = random_iwahori(&mut rng, n, q, 2);
                    assert_eq!(bruhat_iwahori_class(&u.mul(&g).mul(&v)), w, "{w}");
                }
            }
        }
        let q = 3;
        let g = GroupMat::from_monomials(2, q, &[vec![(2, -1), (0, 0)], vec![(0, 0), (1, 0)]]).unwrap();
        let w = bruhat_iwahori_class(&g);
        assert_eq!(w.coweight, Coweight::new(vec![1, 0], vec![2, 1]));
    }

    #[test]
    fn iwahori_factorization_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let g = random_iwahori(&mut rng, 3, 3, 2);
            let (u, d, l) = iwahori_factor(&g).unwrap();
            assert!(is_member(&u, &SubgroupSpec::IPlus));
            assert!(is_member(&d, &SubgroupSpec::T1));
            assert!(is_member(&l, &SubgroupSpec::IMinus));
            assert_eq!(u.mul(&d).mul(&l), g);
        }
        let s = GroupMat::lift(&ExtendedWeylElt::simple(2, 2, 1));
        assert!(iwahori_factor(&s).is_err());
    }

    #[test]
    fn coset_counts() {
        let q = 3;
        for w in elements_with_torus_up_to(2, q, 2) {
            let reps = coset_reps(&w, 16).unwrap();
            assert_eq!(reps.len(), (q as usize).pow(w.length() as u32));
            for (a, x) in reps.iter().enumerate() {
                assert_eq!(bruhat_iwahori_class(x), w);
                for y in &reps[..a] {
                    assert!(!same_right_coset(x, y));
                }
            }
        }
        let long = ExtendedWeylElt::translation(3, Coweight::plain(vec![0, 20]));
        assert!(coset_reps(&long, 16).is_err());
    }

    #[test]
    fn contraction_matches_antidominance() {
        for n in [2, 3] {
            for q in [2, 3] {
                for l in integer_box(n, 2) {
                    for t in torus_parts(n, q) {
                        let c = Coweight::new(l.clone(), t);
                        assert_eq!(contraction_test(&c, q), c.is_antidominant());
                    }
                }
            }
        }
    }

    #[test]
    fn lower_unipotent_contraction_and_nesting() {
        for n in [2, 3] {
            for q in [2, 3] {
                assert!((0..=2).all(|m| lower_unipotent_contracts(n, q, m)));
                assert!(facet_groups_nested(n, q, 3));
            }
        }
    }
}
