//! Quotients of `k^n` by spans of sparse relations.

use std::collections::BTreeMap;

use super::{Field, Scalar, SparseEchelon};

/// Relations are collected first and eliminated at the end. Two-term
/// relations `a x_i + b x_j = 0` identify coordinates through a weighted
/// union-find, so the elimination only sees the remaining relations over
/// the surviving coordinates.
#[derive(Clone, Debug)]
pub struct Presentation {
    field: Field,
    parent: Vec<usize>,
    /// `x_i = scale[i] * x_parent[i]`
    scale: Vec<Scalar>,
    deferred: Vec<BTreeMap<usize, Scalar>>,
}

/// Outcome of [`Presentation::finish`].
#[derive(Clone, Debug)]
pub struct Quotient {
    /// Surviving coordinates; their images span the quotient.
    pub roots: Vec<usize>,
    /// Rank of the remaining relations over the roots.
    pub rank: usize,
}

impl Quotient {
    pub fn dim(&self) -> usize {
        self.roots.len() - self.rank
    }
}

impl Presentation {
    pub fn new(field: &Field, n: usize) -> Self {
        Presentation { field: field.clone(), parent: (0..n).collect(), scale: vec![field.one(); n], deferred: Vec::new() }
    }

    /// `(root, f)` with `x_i = f * x_root`.
    pub fn find(&mut self, i: usize) -> (usize, Scalar) {
        let p = self.parent[i];
        if p == i {
            return (i, self.field.one());
        }
        let (r, f) = self.find(p);
        let s = self.field.mul(&self.scale[i], &f);
        self.parent[i] = r;
        self.scale[i] = s.clone();
        (r, s)
    }

    pub fn add(&mut self, row: BTreeMap<usize, Scalar>) {
        let f = self.field.clone();
        let row: BTreeMap<usize, Scalar> = row.into_iter().filter(|(_, s)| !f.is_zero(s)).collect();
        if row.len() != 2 {
            if !row.is_empty() {
                self.deferred.push(row);
            }
            return;
        }
        let mut it = row.into_iter();
        let (i, a) = it.next().expect("two terms");
        let (j, b) = it.next().expect("two terms");
        let (ri, fi) = self.find(i);
        let (rj, fj) = self.find(j);
        let ca = f.mul(&a, &fi);
        let cb = f.mul(&b, &fj);
        if ri == rj {
            let c = f.add(&ca, &cb);
            if !f.is_zero(&c) {
                self.deferred.push(BTreeMap::from([(ri, c)]));
            }
            return;
        }
        // ca x_ri + cb x_rj = 0
        self.parent[ri] = rj;
        self.scale[ri] = f.neg(&f.div(&cb, &ca).expect("nonzero"));
    }

    /// Eliminates the remaining relations.
    pub fn finish(mut self) -> Quotient {
        let f = self.field.clone();
        let n = self.parent.len();
        let mut roots = Vec::new();
        let mut pos = vec![usize::MAX; n];
        for (i, slot) in pos.iter_mut().enumerate() {
            if self.find(i).0 == i {
                *slot = roots.len();
                roots.push(i);
            }
        }
        let mut ech = SparseEchelon::new(&f);
        let deferred = std::mem::take(&mut self.deferred);
        for row in deferred {
            let mut out: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (i, c) in row {
                let (r, s) = self.find(i);
                let e = out.entry(pos[r]).or_insert_with(|| f.zero());
                *e = f.add(e, &f.mul(&c, &s));
            }
            ech.insert(&out);
        }
        Quotient { roots, rank: ech.rank() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_dense_rank() {
        let f = Field::Prime(5);
        let rows: Vec<Vec<i64>> = vec![
            vec![1, -2, 0, 0, 0],
            vec![0, 1, 3, 0, 0],
            vec![1, 0, 4, 0, 0],
            vec![0, 0, 0, 1, 1],
            vec![0, 0, 1, 1, 1],
        ];
        let mut p = Presentation::new(&f, 5);
        for r in &rows {
            p.add(r.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i, f.from_i64(x))).collect());
        }
        let q = p.finish();
        let dense = crate::linalg::ExactMatrix::from_i64(&f, &rows).rank();
        assert_eq!(q.dim(), 5 - dense);
    }
}
