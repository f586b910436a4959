//! The extended affine Weyl group of GL_n with torus part:
//! `(Z^n x (F_q^x)^n) ⋊ S_n`, its length function, reduced words and the
//! facet combinatorics of the standard apartment.
//!
//! Conventions: positive roots are `e_i - e_j` with `i < j`, the Borel is
//! upper triangular, and an element `(perm, lambda, torus)` stands for
//! `e^(lambda, torus) * perm`. Its canonical lift to `GL_n(F_q(t))` is
//! `diag(torus_i * t^(-lambda_i)) * P_perm` where `P_perm e_j = e_perm(j)`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("size mismatch: n={0} vs n={1}")]
    SizeMismatch(usize, usize),
    #[error("residue field mismatch: q={0} vs q={1}")]
    FieldMismatch(u32, u32),
    #[error("dimension {0} out of range for n={1}")]
    DimensionOutOfRange(usize, usize),
    #[error("invalid element: {0}")]
    Invalid(String),
}

fn mulmod(a: u32, b: u32, q: u32) -> u32 {
    ((a as u64 * b as u64) % q as u64) as u32
}

fn invmod(a: u32, q: u32) -> u32 {
    crate::linalg::poly::inv_mod(a, q)
}

/// An extended coweight: an integer vector with a torus part in `(F_q^x)^n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Coweight {
    pub lambda: Vec<i64>,
    pub torus: Vec<u32>,
}

impl Coweight {
    pub fn new(lambda: Vec<i64>, torus: Vec<u32>) -> Self {
        Coweight { lambda, torus }
    }

    /// Coweight with trivial torus part.
    pub fn plain(lambda: Vec<i64>) -> Self {
        let n = lambda.len();
        Coweight { lambda, torus: vec![1; n] }
    }

    /// `<lambda, alpha> <= 0` for every positive root.
    pub fn is_antidominant(&self) -> bool {
        self.lambda.windows(2).all(|w| w[0] <= w[1])
    }

    /// `<lambda, alpha> < 0` for every positive root.
    pub fn is_strongly_antidominant(&self) -> bool {
        self.lambda.windows(2).all(|w| w[0] < w[1])
    }

    /// Whether the coweight is central, i.e. all coordinates agree.
    pub fn is_central(&self) -> bool {
        self.lambda.windows(2).all(|w| w[0] == w[1])
    }
}

/// Antidominance flags: `(antidominant, strongly antidominant)`.
pub fn is_antidominant(c: &Coweight) -> (bool, bool) {
    (c.is_antidominant(), c.is_strongly_antidominant())
}

/// Element `e^(lambda, torus) * perm` of the extended affine Weyl group.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtendedWeylElt {
    pub q: u32,
    /// `perm[j] = sigma(j)`, zero based.
    pub perm: Vec<usize>,
    pub coweight: Coweight,
}

impl fmt::Debug for ExtendedWeylElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExtendedWeylElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let perm: Vec<String> = self.perm.iter().map(|p| (p + 1).to_string()).collect();
        write!(f, "e^{:?}", self.coweight.lambda)?;
        if self.coweight.torus.iter().any(|&c| c != 1) {
            write!(f, "{:?}", self.coweight.torus)?;
        }
        write!(f, "[{}]", perm.join(""))
    }
}

impl ExtendedWeylElt {
    pub fn new(q: u32, perm: Vec<usize>, coweight: Coweight) -> Result<Self, WeylError> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(WeylError::Invalid(format!("not a permutation: {perm:?}")));
            }
            seen[p] = true;
        }
        if coweight.lambda.len() != n || coweight.torus.len() != n {
            return Err(WeylError::Invalid("coweight length".into()));
        }
        if coweight.torus.iter().any(|&c| c == 0 || c >= q) {
            return Err(WeylError::Invalid(format!("torus entries {:?}", coweight.torus)));
        }
        Ok(ExtendedWeylElt { q, perm, coweight })
    }

    pub fn identity(n: usize, q: u32) -> Self {
        ExtendedWeylElt { q, perm: (0..n).collect(), coweight: Coweight::plain(vec![0; n]) }
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    /// Pure translation `e^(lambda, torus)`.
    pub fn translation(q: u32, c: Coweight) -> Self {
        let n = c.lambda.len();
        ExtendedWeylElt { q, perm: (0..n).collect(), coweight: c }
    }

    /// Finite Weyl group element with trivial coweight.
    pub fn finite(q: u32, perm: Vec<usize>) -> Self {
        let n = perm.len();
        ExtendedWeylElt { q, perm, coweight: Coweight::plain(vec![0; n]) }
    }

    /// Pure torus element (length zero).
    pub fn torus(q: u32, torus: Vec<u32>) -> Self {
        let n = torus.len();
        Self::translation(q, Coweight::new(vec![0; n], torus))
    }

    /// Affine simple reflection `s_i`, `0 <= i < n`. `s_0` is the reflection
    /// in the wall of the base chamber opposite the special vertex.
    pub fn simple(n: usize, q: u32, i: usize) -> Self {
        assert!(i < n && n >= 2);
        let mut perm: Vec<usize> = (0..n).collect();
        if i == 0 {
            perm.swap(0, n - 1);
            let mut lambda = vec![0; n];
            lambda[0] = 1;
            lambda[n - 1] = -1;
            ExtendedWeylElt { q, perm, coweight: Coweight::plain(lambda) }
        } else {
            perm.swap(i - 1, i);
            Self::finite(q, perm)
        }
    }

    /// The length-zero generator: its lift sends `e_1 -> t e_n` and
    /// `e_j -> e_(j-1)`.
    pub fn rotation(n: usize, q: u32) -> Self {
        let perm = (0..n).map(|j| if j == 0 { n - 1 } else { j - 1 }).collect();
        let mut lambda = vec![0; n];
        lambda[n - 1] = -1;
        ExtendedWeylElt { q, perm, coweight: Coweight::plain(lambda) }
    }

    fn check_compatible(&self, o: &Self) -> Result<(), WeylError> {
        if self.n() != o.n() {
            return Err(WeylError::SizeMismatch(self.n(), o.n()));
        }
        if self.q != o.q {
            return Err(WeylError::FieldMismatch(self.q, o.q));
        }
        Ok(())
    }

    /// Group law.
    pub fn multiply(&self, o: &Self) -> Result<Self, WeylError> {
        self.check_compatible(o)?;
        Ok(self.mul(o))
    }

    /// Group law without the compatibility check.
    pub fn mul(&self, o: &Self) -> Self {
        let n = self.n();
        let mut lambda = self.coweight.lambda.clone();
        let mut torus = self.coweight.torus.clone();
        for j in 0..n {
            let i = self.perm[j];
            lambda[i] += o.coweight.lambda[j];
            torus[i] = mulmod(torus[i], o.coweight.torus[j], self.q);
        }
        let perm = o.perm.iter().map(|&j| self.perm[j]).collect();
        ExtendedWeylElt { q: self.q, perm, coweight: Coweight { lambda, torus } }
    }

    pub fn inverse(&self) -> Self {
        let n = self.n();
        let mut inv = vec![0; n];
        for (j, &i) in self.perm.iter().enumerate() {
            inv[i] = j;
        }
        // (e^l s)^-1 = s^-1 e^-l = e^(-s^-1 l) s^-1, (s^-1 l)_j = l_(s(j))
        let lambda = (0..n).map(|j| -self.coweight.lambda[self.perm[j]]).collect();
        let torus = (0..n).map(|j| invmod(self.coweight.torus[self.perm[j]], self.q)).collect();
        ExtendedWeylElt { q: self.q, perm: inv, coweight: Coweight { lambda, torus } }
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        (0..k.unsigned_abs()).fold(Self::identity(self.n(), self.q), |acc, _| acc.mul(&base))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n(), self.q)
    }

    /// Same element with trivial torus part.
    pub fn without_torus(&self) -> Self {
        let mut w = self.clone();
        w.coweight.torus = vec![1; self.n()];
        w
    }

    /// The torus part as a length-zero element.
    pub fn torus_part(&self) -> Self {
        Self::torus(self.q, self.coweight.torus.clone())
    }

    pub fn has_trivial_torus(&self) -> bool {
        self.coweight.torus.iter().all(|&c| c == 1)
    }

    pub fn is_translation(&self) -> bool {
        self.perm.iter().enumerate().all(|(j, &p)| j == p)
    }

    /// Image in the finite Weyl group.
    pub fn finite_part(&self) -> Self {
        Self::finite(self.q, self.perm.clone())
    }

    /// Length, by the affine inversion count.
    ///
    /// For `w = e^lambda sigma` and each positive root `e_i - e_j` the
    /// contribution is `|lambda_i - lambda_j|` when `sigma^-1` keeps the root
    /// positive and `|lambda_i - lambda_j - 1|` otherwise.
    pub fn length(&self) -> usize {
        let n = self.n();
        let mut inv = vec![0; n];
        for (j, &i) in self.perm.iter().enumerate() {
            inv[i] = j;
        }
        let l = &self.coweight.lambda;
        let mut total = 0;
        for i in 0..n {
            for j in i + 1..n {
                let d = l[i] - l[j];
                total += if inv[i] < inv[j] { d.abs() } else { (d - 1).abs() } as usize;
            }
        }
        total
    }

    /// `(omega_part, word)` with `omega_part * s_word[0] * ... = self`,
    /// `omega_part` of length zero (carrying the torus part) and
    /// `word.len() == self.length()`. Right descents are peeled with the
    /// lowest index first.
    pub fn reduced_word(&self) -> (Self, Vec<usize>) {
        let n = self.n();
        let mut w = self.clone();
        let mut rev = Vec::new();
        let mut len = w.length();
        while len > 0 {
            let (i, next) = (0..n)
                .map(|i| (i, w.mul(&Self::simple(n, self.q, i))))
                .find(|(_, x)| x.length() < len)
                .expect("an element of positive length has a descent");
            rev.push(i);
            w = next;
            len -= 1;
        }
        rev.reverse();
        (w, rev)
    }

    /// Product of a word in the simple reflections.
    pub fn from_word(n: usize, q: u32, word: &[usize]) -> Self {
        word.iter().fold(Self::identity(n, q), |acc, &i| acc.mul(&Self::simple(n, q, i)))
    }

    /// Exponent `k` with `self = rotation^k` modulo the center and torus
    /// when `self` has length zero.
    pub fn rotation_index(&self) -> usize {
        let s: i64 = self.coweight.lambda.iter().sum();
        (-s).rem_euclid(self.n() as i64) as usize
    }

    /// Element of the center `e^(k,...,k)`.
    pub fn central(n: usize, q: u32, k: i64) -> Self {
        Self::translation(q, Coweight::plain(vec![k; n]))
    }

    /// Writes `self = center * rep` with `rep` having coordinate sum in
    /// `(-n, 0]`; returns `(k, rep)` where the center is `e^(k,...,k)`.
    pub fn split_center(&self) -> (i64, Self) {
        let n = self.n() as i64;
        let s: i64 = self.coweight.lambda.iter().sum();
        let k = s.div_euclid(n) + if s.rem_euclid(n) == 0 { 0 } else { 1 };
        let mut rep = self.clone();
        for x in rep.coweight.lambda.iter_mut() {
            *x -= k;
        }
        (k, rep)
    }

    /// Compact byte encoding used as a cache key.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.push(self.n() as u8);
        out.extend(self.perm.iter().map(|&p| p as u8));
        for &l in &self.coweight.lambda {
            out.extend_from_slice(&l.to_le_bytes());
        }
        for &c in &self.coweight.torus {
            out.extend_from_slice(&c.to_le_bytes());
        }
        out
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let n = used.len();
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// All torus parts in `(F_q^x)^n`, lexicographically.
pub fn torus_parts(n: usize, q: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (1..q).map(move |c| {
                    let mut v = v.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out
}

/// Integer vectors with entries in `[-b, b]`.
pub fn integer_box(n: usize, b: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-b..=b).map(move |c| {
                    let mut v = v.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out
}

/// Elements of length at most `max_len` whose coordinate sum lies in
/// `(-n, 0]` (one representative per coset of the center), with trivial
/// torus part, sorted by `(length, element)`.
pub fn elements_up_to(n: usize, q: u32, max_len: usize) -> Vec<ExtendedWeylElt> {
    let b = (max_len + n) as i64;
    let mut out = Vec::new();
    for perm in permutations(n) {
        for lambda in integer_box(n, b) {
            let s: i64 = lambda.iter().sum();
            if s > 0 || s <= -(n as i64) {
                continue;
            }
            let w = ExtendedWeylElt::finite(q, perm.clone());
            let w = ExtendedWeylElt::translation(q, Coweight::plain(lambda)).mul(&w);
            if w.length() <= max_len {
                out.push(w);
            }
        }
    }
    out.sort_by_cached_key(|w| (w.length(), w.clone()));
    out
}

/// Same as [`elements_up_to`] but with every torus part.
pub fn elements_with_torus_up_to(n: usize, q: u32, max_len: usize) -> Vec<ExtendedWeylElt> {
    let tori = torus_parts(n, q);
    let mut out = Vec::new();
    for w in elements_up_to(n, q, max_len) {
        for t in &tori {
            out.push(ExtendedWeylElt::torus(q, t.clone()).mul(&w));
        }
    }
    out
}

/// Lengths by breadth-first search over words in the simple reflections
/// and the rotation (which costs nothing). Keys have trivial torus part.
/// Independent of [`ExtendedWeylElt::length`].
pub fn lengths_by_search(n: usize, q: u32, max_len: usize) -> HashMap<ExtendedWeylElt, usize> {
    let rot = ExtendedWeylElt::rotation(n, q);
    let rot_inv = rot.inverse();
    let gens: Vec<ExtendedWeylElt> = (0..n).map(|i| ExtendedWeylElt::simple(n, q, i)).collect();
    // only rotation powers modulo the center matter inside the window
    let normalize = |w: ExtendedWeylElt| w.split_center().1;
    let mut dist: HashMap<ExtendedWeylElt, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let start = ExtendedWeylElt::identity(n, q);
    dist.insert(start.clone(), 0);
    queue.push_back(start);
    while let Some(w) = queue.pop_front() {
        let d = dist[&w];
        for r in [&rot, &rot_inv] {
            let x = normalize(w.mul(r));
            if !dist.contains_key(&x) {
                dist.insert(x.clone(), d);
                queue.push_front(x);
            }
        }
        if d == max_len {
            continue;
        }
        for g in &gens {
            let x = normalize(w.mul(g));
            if !dist.contains_key(&x) {
                dist.insert(x.clone(), d + 1);
                queue.push_back(x);
            }
        }
    }
    dist
}

/// A facet of the base chamber, by the types of its vertices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ApartmentFacet {
    pub n: usize,
    pub vertex_types: BTreeSet<usize>,
}

impl ApartmentFacet {
    pub fn new(n: usize, types: impl IntoIterator<Item = usize>) -> Result<Self, WeylError> {
        let vertex_types: BTreeSet<usize> = types.into_iter().collect();
        if vertex_types.is_empty() || vertex_types.iter().any(|&j| j >= n) {
            return Err(WeylError::Invalid(format!("facet types {vertex_types:?} for n={n}")));
        }
        Ok(ApartmentFacet { n, vertex_types })
    }

    /// The base chamber.
    pub fn chamber(n: usize) -> Self {
        Self::new(n, 0..n).expect("valid")
    }

    /// The special vertex `x_0`.
    pub fn base_vertex(n: usize) -> Self {
        Self::new(n, [0]).expect("valid")
    }

    pub fn dim(&self) -> usize {
        self.vertex_types.len() - 1
    }

    pub fn contains_base_vertex(&self) -> bool {
        self.vertex_types.contains(&0)
    }

    /// Rotate all vertex types by `k`.
    pub fn rotate(&self, k: usize) -> Self {
        let vertex_types = self.vertex_types.iter().map(|&j| (j + k) % self.n).collect();
        ApartmentFacet { n: self.n, vertex_types }
    }

    /// Positive-root indices `(i, j)`, `i < j`, of the Levi of this facet:
    /// roots that stay within one block. Blocks are cut just before the
    /// positions `n - j` for the vertex types `j != 0`. Only meaningful when
    /// the facet contains `x_0`.
    pub fn levi_roots(&self) -> Vec<(usize, usize)> {
        let block = self.blocks();
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if block[i] == block[j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Block index of each position for a facet containing `x_0`.
    pub fn blocks(&self) -> Vec<usize> {
        let cuts: BTreeSet<usize> =
            self.vertex_types.iter().filter(|&&j| j != 0).map(|&j| self.n - j).collect();
        let mut b = 0;
        (0..self.n)
            .map(|i| {
                if cuts.contains(&i) {
                    b += 1;
                }
                b
            })
            .collect()
    }

    /// Every facet of the base chamber that contains `x_0`.
    pub fn all_through_base_vertex(n: usize) -> Vec<ApartmentFacet> {
        let mut out = Vec::new();
        for mask in 0u32..(1 << (n - 1)) {
            let types = std::iter::once(0).chain((1..n).filter(|j| mask >> (j - 1) & 1 == 1));
            out.push(Self::new(n, types).expect("valid"));
        }
        out.sort_by_key(|f| (f.dim(), f.vertex_types.iter().copied().collect::<Vec<_>>()));
        out
    }

    /// Every facet of the base chamber.
    pub fn all(n: usize) -> Vec<ApartmentFacet> {
        let mut out = Vec::new();
        for mask in 1u32..(1 << n) {
            out.push(Self::new(n, (0..n).filter(|j| mask >> j & 1 == 1)).expect("valid"));
        }
        out.sort_by_key(|f| (f.dim(), f.vertex_types.iter().copied().collect::<Vec<_>>()));
        out
    }
}

/// One representative per orbit of `i`-dimensional facets, each containing
/// `x_0`. Orbits are taken under the length-zero subgroup, which rotates
/// the vertex types of the base chamber.
pub fn orbit_facets(n: usize, i: usize) -> Result<Vec<ApartmentFacet>, WeylError> {
    if i >= n {
        return Err(WeylError::DimensionOutOfRange(i, n));
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for f in ApartmentFacet::all(n).into_iter().filter(|f| f.dim() == i) {
        let orbit: BTreeSet<ApartmentFacet> = (0..n).map(|k| f.rotate(k)).collect();
        if orbit.iter().any(|g| seen.contains(g)) {
            continue;
        }
        let rep = orbit
            .iter()
            .filter(|g| g.contains_base_vertex())
            .min_by_key(|g| g.vertex_types.iter().copied().collect::<Vec<_>>())
            .expect("every orbit meets x_0")
            .clone();
        seen.extend(orbit);
        out.push(rep);
    }
    Ok(out)
}

/// Diagonal lattice `(t^a_1 O, ..., t^a_n O)` of the vertex of type `j` of
/// the base chamber.
pub fn vertex_lattice(n: usize, j: usize) -> Vec<i64> {
    (0..n).map(|i| if i >= n - j { 1 } else { 0 }).collect()
}

fn lattice_class(a: &[i64]) -> Vec<i64> {
    let m = a[0];
    a.iter().map(|x| x - m).collect()
}

/// Checks that every translation `e^lambda` (`|lambda_i| <= bound`) with
/// `e^lambda x_0` in the closure of `f` and `e^lambda f = f` is central.
/// Translations act on diagonal lattice exponents by `a -> a - lambda`.
pub fn apartment_stabilizer_check(f: &ApartmentFacet, bound: i64) -> bool {
    let n = f.n;
    let verts: BTreeSet<Vec<i64>> =
        f.vertex_types.iter().map(|&j| lattice_class(&vertex_lattice(n, j))).collect();
    let x0 = vertex_lattice(n, 0);
    integer_box(n, bound).into_iter().all(|lambda| {
        let act = |a: &[i64]| lattice_class(&a.iter().zip(&lambda).map(|(x, l)| x - l).collect::<Vec<_>>());
        let moves_x0_inside = verts.contains(&act(&x0));
        let stabilizes = verts.iter().map(|v| act(v)).collect::<BTreeSet<_>>() == verts;
        !(moves_x0_inside && stabilizes) || lambda.windows(2).all(|w| w[0] == w[1])
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_examples() {
        assert_eq!(ExtendedWeylElt::identity(3, 2).length(), 0);
        assert_eq!(ExtendedWeylElt::simple(2, 2, 1).length(), 1);
        assert_eq!(ExtendedWeylElt::simple(3, 3, 0).length(), 1);
        assert_eq!(ExtendedWeylElt::rotation(3, 3).length(), 0);
        let e = ExtendedWeylElt::translation(2, Coweight::plain(vec![0, 1]));
        assert_eq!(e.length(), 1);
    }

    #[test]
    fn length_matches_word_search() {
        for n in [2, 3] {
            let bfs = lengths_by_search(n, 2, 4);
            let elts = elements_up_to(n, 2, 4);
            for w in &elts {
                assert_eq!(bfs.get(w), Some(&w.length()), "{w}");
            }
            let small = bfs.values().filter(|&&d| d <= 4).count();
            assert_eq!(small, elts.len());
        }
    }

    #[test]
    fn group_law_basics() {
        let q = 3;
        let w = ExtendedWeylElt::new(q, vec![1, 2, 0], Coweight::new(vec![2, -1, 0], vec![2, 1, 2]))
            .unwrap();
        assert!(w.mul(&w.inverse()).is_identity());
        let a = ExtendedWeylElt::translation(q, Coweight::new(vec![1, 0], vec![2, 1]));
        let b = ExtendedWeylElt::translation(q, Coweight::new(vec![3, -1], vec![2, 2]));
        let ab = a.mul(&b);
        assert_eq!(ab.coweight, Coweight::new(vec![4, -1], vec![1, 2]));
        let s = ExtendedWeylElt::simple(2, q, 1);
        let lhs = s.mul(&ExtendedWeylElt::translation(q, Coweight::plain(vec![1, 0])));
        let rhs = ExtendedWeylElt::translation(q, Coweight::plain(vec![0, 1])).mul(&s);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn reduced_words_multiply_back() {
        for n in [2, 3] {
            for w in elements_with_torus_up_to(n, 3, 3) {
                let (om, word) = w.reduced_word();
                assert_eq!(om.length(), 0);
                assert_eq!(word.len(), w.length());
                assert_eq!(om.mul(&ExtendedWeylElt::from_word(n, 3, &word)), w);
            }
        }
        let e = ExtendedWeylElt::translation(2, Coweight::plain(vec![0, 1]));
        let (om, word) = e.reduced_word();
        assert_eq!(word.len(), 1);
        assert!(!om.is_identity());
    }

    #[test]
    fn simple_reflections_are_involutions() {
        for n in [2, 3, 4] {
            for i in 0..n {
                let s = ExtendedWeylElt::simple(n, 2, i);
                assert!(s.mul(&s).is_identity());
            }
            let r = ExtendedWeylElt::rotation(n, 2);
            assert_eq!(r.pow(n as i64), ExtendedWeylElt::central(n, 2, -1));
        }
    }

    #[test]
    fn orbit_facet_representatives() {
        assert_eq!(orbit_facets(2, 0).unwrap(), vec![ApartmentFacet::new(2, [0]).unwrap()]);
        assert_eq!(orbit_facets(2, 1).unwrap(), vec![ApartmentFacet::new(2, [0, 1]).unwrap()]);
        assert_eq!(orbit_facets(3, 0).unwrap(), vec![ApartmentFacet::new(3, [0]).unwrap()]);
        assert_eq!(orbit_facets(3, 1).unwrap().len(), 1);
        assert!(orbit_facets(3, 3).is_err());
    }

    #[test]
    fn stabilizer_check_on_base_facets() {
        for n in [2, 3] {
            for f in ApartmentFacet::all_through_base_vertex(n) {
                assert!(apartment_stabilizer_check(&f, 2));
            }
        }
    }

    #[test]
    fn levi_blocks() {
        let f = ApartmentFacet::new(3, [0, 1]).unwrap();
        assert_eq!(f.blocks(), vec![0, 0, 1]);
        assert_eq!(f.levi_roots(), vec![(0, 1)]);
        assert!(ApartmentFacet::chamber(3).levi_roots().is_empty());
        assert_eq!(ApartmentFacet::base_vertex(3).levi_roots().len(), 3);
    }
}
