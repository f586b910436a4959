//! Matrices over `F_q[t] / t^m` and canonical representatives for left
//! cosets of upper triangular subgroups.

use std::collections::HashMap;

use crate::group::GroupMat;
use crate::linalg::poly::inv_mod;

/// Square matrix over `F_q[t]/t^m`, `q` prime. Entry `(i, j)` holds the
/// coefficients of `1, t, ..., t^(m-1)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TruncMat {
    pub n: usize,
    pub q: u32,
    pub m: usize,
    c: Vec<u32>,
}

/// Which upper triangular group the coset representatives are taken for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalize {
    /// Full upper triangular group: pivots scaled to one.
    Borel,
    /// Upper unitriangular group: pivots left alone.
    Unipotent,
}

fn poly_mul(q: u32, m: usize, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = vec![0u64; m];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().take(m - i).enumerate() {
            out[i + j] += x as u64 * y as u64;
        }
    }
    out.into_iter().map(|v| (v % q as u64) as u32).collect()
}

/// Inverse of a unit power series truncated at `t^m`.
fn poly_inv(q: u32, m: usize, a: &[u32]) -> Vec<u32> {
    let a0 = inv_mod(a[0], q) as u64;
    let mut out = vec![0u32; m];
    out[0] = a0 as u32;
    for k in 1..m {
        let mut s = 0u64;
        for j in 1..=k {
            s += a[j] as u64 * out[k - j] as u64;
        }
        let s = (s % q as u64) as u32;
        out[k] = (((q - s) % q) as u64 * a0 % q as u64) as u32;
    }
    out
}

impl TruncMat {
    pub fn identity(n: usize, q: u32, m: usize) -> Self {
        let mut c = vec![0; n * n * m];
        for i in 0..n {
            c[(i * n + i) * m] = 1;
        }
        TruncMat { n, q, m, c }
    }

    pub fn from_coeffs(n: usize, q: u32, m: usize, c: Vec<u32>) -> Self {
        assert_eq!(c.len(), n * n * m);
        TruncMat { n, q, m, c }
    }

    /// Reduction of an integral matrix.
    pub fn from_group(g: &GroupMat, m: usize) -> Self {
        TruncMat { n: g.n(), q: g.q(), m, c: g.truncate(m) }
    }

    /// Lift with polynomial entries.
    pub fn to_group(&self) -> GroupMat {
        GroupMat::from_truncated(self.n, self.q, self.m, &self.c)
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.c
    }

    pub fn entry(&self, i: usize, j: usize) -> &[u32] {
        let s = (i * self.n + j) * self.m;
        &self.c[s..s + self.m]
    }

    fn row(&self, i: usize) -> Vec<Vec<u32>> {
        (0..self.n).map(|j| self.entry(i, j).to_vec()).collect()
    }

    /// `1 + c t^a E_ij` (for `i == j` the diagonal entry becomes `1 + c t^a`).
    pub fn elementary(n: usize, q: u32, m: usize, i: usize, j: usize, a: usize, c: u32) -> Self {
        let mut g = Self::identity(n, q, m);
        let k = (i * n + j) * m + a;
        g.c[k] = (g.c[k] + c) % q;
        g
    }

    pub fn mul(&self, o: &TruncMat) -> TruncMat {
        let (n, m, q) = (self.n, self.m, self.q);
        let mut c = vec![0u64; n * n * m];
        for i in 0..n {
            for k in 0..n {
                let a = self.entry(i, k);
                if a.iter().all(|&x| x == 0) {
                    continue;
                }
                for j in 0..n {
                    let b = o.entry(k, j);
                    let base = (i * n + j) * m;
                    for (s, &x) in a.iter().enumerate() {
                        if x == 0 {
                            continue;
                        }
                        for (r, &y) in b.iter().take(m - s).enumerate() {
                            c[base + s + r] += x as u64 * y as u64;
                        }
                    }
                }
            }
        }
        TruncMat { n, q, m, c: c.into_iter().map(|v| (v % q as u64) as u32).collect() }
    }

    /// Inverse by Gauss-Jordan elimination with unit pivots; `None` when
    /// the residue matrix is singular.
    pub fn inverse(&self) -> Option<TruncMat> {
        let (n, m, q) = (self.n, self.m, self.q);
        let mut a: Vec<Vec<Vec<u32>>> = (0..n).map(|i| self.row(i)).collect();
        let mut b: Vec<Vec<Vec<u32>>> = (0..n).map(|i| Self::identity(n, q, m).row(i)).collect();
        for col in 0..n {
            let p = (col..n).find(|&r| a[r][col][0] != 0)?;
            a.swap(col, p);
            b.swap(col, p);
            let inv = poly_inv(q, m, &a[col][col]);
            for x in a[col].iter_mut().chain(b[col].iter_mut()) {
                *x = poly_mul(q, m, x, &inv);
            }
            for r in 0..n {
                if r == col || a[r][col].iter().all(|&x| x == 0) {
                    continue;
                }
                let f = a[r][col].clone();
                for j in 0..n {
                    let da = poly_mul(q, m, &f, &a[col][j]);
                    let db = poly_mul(q, m, &f, &b[col][j]);
                    for (x, y) in a[r][j].iter_mut().zip(da) {
                        *x = (*x + q - y) % q;
                    }
                    for (x, y) in b[r][j].iter_mut().zip(db) {
                        *x = (*x + q - y) % q;
                    }
                }
            }
        }
        Some(TruncMat { n, q, m, c: b.into_iter().flatten().flatten().collect() })
    }

    /// Residue matrix modulo `t`.
    pub fn residue(&self) -> TruncMat {
        let c = (0..self.n * self.n).map(|k| self.c[k * self.m]).collect();
        TruncMat { n: self.n, q: self.q, m: 1, c }
    }

    /// Writes `self = b * r` with `b` upper triangular and `r` canonical.
    ///
    /// Rows are handled from the bottom. Each row first has its entries in
    /// the pivot columns of the rows below cleared (lowest row first), then
    /// its pivot is the leftmost unit entry. Returns the residues of the
    /// diagonal of `b` together with `r`. Panics on a singular matrix.
    pub fn canonical(&self, mode: Normalize) -> (Vec<u32>, TruncMat) {
        let (n, m, q) = (self.n, self.m, self.q);
        let mut rows: Vec<Vec<Vec<u32>>> = vec![Vec::new(); n];
        let mut pivots = vec![0usize; n];
        let mut diag = vec![0u32; n];
        for i in (0..n).rev() {
            let mut row = self.row(i);
            for j in (i + 1..n).rev() {
                let p = pivots[j];
                if row[p].iter().all(|&x| x == 0) {
                    continue;
                }
                let mut f = row[p].clone();
                if mode == Normalize::Unipotent {
                    f = poly_mul(q, m, &f, &poly_inv(q, m, &rows[j][p]));
                }
                for (col, r) in rows[j].iter().enumerate() {
                    let d = poly_mul(q, m, &f, r);
                    for (x, y) in row[col].iter_mut().zip(d) {
                        *x = (*x + q - y) % q;
                    }
                }
            }
            let p = (0..n).find(|&c| row[c][0] != 0).expect("invertible matrix");
            pivots[i] = p;
            diag[i] = row[p][0];
            if mode == Normalize::Borel {
                let inv = poly_inv(q, m, &row[p]);
                for x in row.iter_mut() {
                    *x = poly_mul(q, m, x, &inv);
                }
            }
            rows[i] = row;
        }
        if mode == Normalize::Unipotent {
            diag = vec![1; n];
        }
        let c = rows.into_iter().flatten().flatten().collect();
        (diag, TruncMat { n, q, m, c })
    }
}

/// Generators `1 + t^a E_ij` (`i != j`, `a < m`) of `SL_n(O/t^m)`.
pub fn elementary_generators(n: usize, q: u32, m: usize) -> Vec<TruncMat> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                for a in 0..m {
                    out.push(TruncMat::elementary(n, q, m, i, j, a, 1));
                }
            }
        }
    }
    out
}

/// Canonical coset representatives, indexed.
#[derive(Clone, Debug)]
pub struct CosetSpace {
    pub n: usize,
    pub q: u32,
    pub m: usize,
    pub mode: Normalize,
    pub reps: Vec<TruncMat>,
    index: HashMap<Vec<u32>, usize>,
}

impl CosetSpace {
    /// All cosets `B \ GL_n(O/t^m)` (or `U \ ...`), by search from the
    /// identity under right multiplication. For `Unipotent` the diagonal
    /// torus is added to the generators.
    pub fn enumerate(n: usize, q: u32, m: usize, mode: Normalize) -> Self {
        let mut gens = elementary_generators(n, q, m);
        if mode == Normalize::Unipotent && q > 2 {
            let g = crate::character::primitive_root(q);
            for i in 0..n {
                gens.push(TruncMat::elementary(n, q, m, i, i, 0, g - 1));
            }
        }
        let start = TruncMat::identity(n, q, m).canonical(mode).1;
        let mut sp = CosetSpace { n, q, m, mode, reps: vec![start.clone()], index: HashMap::new() };
        sp.index.insert(start.c, 0);
        let mut head = 0;
        while head < sp.reps.len() {
            let r = sp.reps[head].clone();
            head += 1;
            for g in &gens {
                let (_, s) = r.mul(g).canonical(mode);
                if !sp.index.contains_key(&s.c) {
                    sp.index.insert(s.c.clone(), sp.reps.len());
                    sp.reps.push(s);
                }
            }
        }
        sp
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// `(diagonal residues, index)` with `g = b * reps[index]`.
    pub fn locate(&self, g: &TruncMat) -> (Vec<u32>, usize) {
        let (d, r) = g.canonical(self.mode);
        (d, self.index[&r.c])
    }

    pub fn index_of(&self, r: &TruncMat) -> Option<usize> {
        self.index.get(&r.c).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn flag_count(n: usize, q: u64) -> u64 {
        (1..=n as u32).map(|k| (0..k).map(|j| q.pow(j)).sum::<u64>()).product()
    }

    #[test]
    fn coset_counts() {
        for (n, q, m) in [(2, 2, 1), (2, 3, 1), (2, 3, 3), (3, 2, 1), (3, 3, 1), (3, 2, 2), (2, 2, 4)] {
            let sp = CosetSpace::enumerate(n, q, m, Normalize::Borel);
            let extra = (q as u64).pow((n * (n - 1) / 2 * (m - 1)) as u32);
            assert_eq!(sp.len() as u64, flag_count(n, q as u64) * extra, "n={n} q={q} m={m}");
        }
        // |U \ GL_2(F_3)| = 48 / 3
        assert_eq!(CosetSpace::enumerate(2, 3, 1, Normalize::Unipotent).len(), 16);
        assert_eq!(CosetSpace::enumerate(3, 3, 1, Normalize::Unipotent).len(), 52 * 8);
    }

    #[test]
    fn inverse_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let sp = CosetSpace::enumerate(3, 3, 2, Normalize::Borel);
        for _ in 0..20 {
            let g = sp.reps[rng.gen_range(0..sp.len())].clone();
            assert_eq!(g.mul(&g.inverse().unwrap()), TruncMat::identity(3, 3, 2));
        }
        assert!(TruncMat::from_coeffs(2, 3, 1, vec![1, 1, 1, 1]).inverse().is_none());
    }

    #[test]
    fn canonical_form_is_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (n, q, m) = (3, 3, 2);
        let sp = CosetSpace::enumerate(n, q, m, Normalize::Borel);
        for _ in 0..50 {
            let r = &sp.reps[rng.gen_range(0..sp.len())];
            let mut b = TruncMat::identity(n, q, m);
            let mut d = vec![0; n];
            for (i, di) in d.iter_mut().enumerate() {
                for j in i..n {
                    for a in 0..m {
                        b.c[(i * n + j) * m + a] = rng.gen_range(0..q);
                    }
                }
                let u = rng.gen_range(1..q);
                b.c[(i * n + i) * m] = u;
                *di = u;
            }
            let (res, idx) = sp.locate(&b.mul(r));
            assert_eq!(&sp.reps[idx], r);
            assert_eq!(res, d);
        }
    }
}
