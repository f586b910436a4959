//! Dense exact matrices and an incremental sparse echelon form.

use std::collections::BTreeMap;
use std::fmt;

use super::field::{Field, Scalar};
use super::LinalgError;

/// A dense matrix over one [`Field`], row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|s| s.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Result of row reduction.
#[derive(Clone, Debug)]
pub struct Echelon {
    /// Reduced row echelon form, nonzero rows only.
    pub rref: ExactMatrix,
    /// Pivot column of each nonzero row.
    pub pivots: Vec<usize>,
}

impl ExactMatrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        ExactMatrix { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// Builds a matrix, checking that every entry lies in `field`.
    pub fn from_rows(field: &Field, rows: Vec<Vec<Scalar>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(LinalgError::Shape(format!("ragged row of length {}", row.len())));
            }
            for s in row {
                if !field.contains(&s) {
                    return Err(LinalgError::MixedFields);
                }
                data.push(s);
            }
        }
        Ok(ExactMatrix { field: field.clone(), rows: r, cols: c, data })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(field: &Field, rows: &[Vec<i64>]) -> Self {
        let rows = rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect();
        Self::from_rows(field, rows).expect("integer entries embed in every field")
    }

    /// Builds a `rows x cols` matrix column by column.
    pub fn from_cols(field: &Field, rows: usize, cols: &[Vec<Scalar>]) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(field, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            if col.len() != rows {
                return Err(LinalgError::Shape(format!("column of length {}", col.len())));
            }
            for (i, s) in col.iter().enumerate() {
                m.set(i, j, s.clone())?;
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, s: Scalar) -> Result<(), LinalgError> {
        if !self.field.contains(&s) {
            return Err(LinalgError::MixedFields);
        }
        self.data[r * self.cols + c] = s;
        Ok(())
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|s| self.field.is_zero(s))
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &ExactMatrix) -> Result<ExactMatrix, LinalgError> {
        if self.field != o.field {
            return Err(LinalgError::MixedFields);
        }
        if self.cols != o.rows {
            return Err(LinalgError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let idx = i * o.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::Shape(format!("vector of length {}", v.len())));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r).iter().zip(v).fold(f.zero(), |acc, (a, b)| {
                    if f.is_zero(a) || f.is_zero(b) {
                        acc
                    } else {
                        f.add(&acc, &f.mul(a, b))
                    }
                })
            })
            .collect())
    }

    /// Stacks `self` on top of `o`.
    pub fn vstack(&self, o: &ExactMatrix) -> Result<ExactMatrix, LinalgError> {
        if self.field != o.field {
            return Err(LinalgError::MixedFields);
        }
        if self.cols != o.cols {
            return Err(LinalgError::Shape("vstack column mismatch".into()));
        }
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Ok(ExactMatrix { field: self.field.clone(), rows: self.rows + o.rows, cols: self.cols, data })
    }

    /// Places `self` and `o` side by side.
    pub fn hstack(&self, o: &ExactMatrix) -> Result<ExactMatrix, LinalgError> {
        self.transpose().vstack(&o.transpose()).map(|m| m.transpose())
    }

    /// Reduced row echelon form. Pivots are chosen in the first nonzero
    /// column, on the first row (from the top of the unreduced part) with a
    /// nonzero entry there.
    pub fn echelon(&self) -> Echelon {
        let f = &self.field;
        let mut rows: Vec<Vec<Scalar>> = (0..self.rows).map(|r| self.row(r).to_vec()).collect();
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            if next == rows.len() {
                break;
            }
            let Some(p) = (next..rows.len()).find(|&r| !f.is_zero(&rows[r][c])) else {
                continue;
            };
            rows.swap(next, p);
            let inv = f.inv(&rows[next][c]).expect("pivot is nonzero");
            if !f.is_one(&inv) {
                for x in rows[next][c..].iter_mut() {
                    *x = f.mul(x, &inv);
                }
            }
            let pivot_row = rows[next].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r == next || f.is_zero(&row[c]) {
                    continue;
                }
                let factor = row[c].clone();
                for (x, y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    if !f.is_zero(y) {
                        *x = f.sub(x, &f.mul(&factor, y));
                    }
                }
            }
            pivots.push(c);
            next += 1;
        }
        rows.truncate(next);
        let rref = ExactMatrix {
            field: f.clone(),
            rows: next,
            cols: self.cols,
            data: rows.into_iter().flatten().collect(),
        };
        Echelon { rref, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Rank and a kernel basis. The kernel vector attached to the free
    /// column `j` has a 1 in position `j` and zeros in every other free
    /// position, so the basis is itself in reduced echelon form (read from
    /// the right).
    pub fn rank_and_kernel(&self) -> (usize, Vec<Vec<Scalar>>) {
        let f = &self.field;
        let Echelon { rref, pivots } = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut kernel = Vec::new();
        for j in (0..self.cols).filter(|&j| !is_pivot[j]) {
            let mut v = vec![f.zero(); self.cols];
            v[j] = f.one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(rref.get(i, j));
            }
            kernel.push(v);
        }
        (pivots.len(), kernel)
    }
}

/// Incrementally maintained reduced echelon basis of a row space, with
/// sparse rows. Useful when rows arrive one at a time and most are
/// dependent.
#[derive(Clone, Debug)]
pub struct SparseEchelon {
    field: Field,
    /// pivot column -> row normalized to 1 at the pivot, fully reduced
    /// against the other pivots.
    rows: BTreeMap<usize, BTreeMap<usize, Scalar>>,
}

impl SparseEchelon {
    pub fn new(field: &Field) -> Self {
        SparseEchelon { field: field.clone(), rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces a row against the basis, returning the remainder.
    pub fn reduce(&self, row: &BTreeMap<usize, Scalar>) -> BTreeMap<usize, Scalar> {
        let f = &self.field;
        let mut v: BTreeMap<usize, Scalar> =
            row.iter().filter(|(_, s)| !f.is_zero(s)).map(|(k, s)| (*k, s.clone())).collect();
        let cols: Vec<usize> = v.keys().copied().filter(|c| self.rows.contains_key(c)).collect();
        for c in cols {
            let Some(factor) = v.get(&c).cloned() else {
                continue;
            };
            for (k, s) in &self.rows[&c] {
                let nv = f.sub(v.get(k).unwrap_or(&f.zero()), &f.mul(&factor, s));
                if f.is_zero(&nv) {
                    v.remove(k);
                } else {
                    v.insert(*k, nv);
                }
            }
        }
        v
    }

    /// Whether the row lies in the span.
    pub fn contains(&self, row: &BTreeMap<usize, Scalar>) -> bool {
        self.reduce(row).is_empty()
    }

    /// Adds a row; returns `true` if it increased the rank.
    pub fn insert(&mut self, row: &BTreeMap<usize, Scalar>) -> bool {
        let f = self.field.clone();
        let v = self.reduce(row);
        let Some((&c, lead)) = v.iter().next() else {
            return false;
        };
        let inv = f.inv(lead).expect("nonzero");
        let v: BTreeMap<usize, Scalar> = v.iter().map(|(k, s)| (*k, f.mul(s, &inv))).collect();
        for other in self.rows.values_mut() {
            let Some(factor) = other.get(&c).cloned() else {
                continue;
            };
            for (k, s) in &v {
                let nv = f.sub(other.get(k).unwrap_or(&f.zero()), &f.mul(&factor, s));
                if f.is_zero(&nv) {
                    other.remove(k);
                } else {
                    other.insert(*k, nv);
                }
            }
        }
        self.rows.insert(c, v);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_matrix_kernel_is_standard_basis() {
        let f = Field::Prime(2);
        let m = ExactMatrix::zeros(&f, 3, 3);
        let (r, k) = m.rank_and_kernel();
        assert_eq!(r, 0);
        assert_eq!(k.len(), 3);
        for (i, v) in k.iter().enumerate() {
            for (j, s) in v.iter().enumerate() {
                assert_eq!(f.is_one(s), i == j);
            }
        }
    }

    #[test]
    fn identity_over_rationals_has_trivial_kernel() {
        let m = ExactMatrix::identity(&Field::Rational, 4);
        let (r, k) = m.rank_and_kernel();
        assert_eq!((r, k.len()), (4, 0));
    }

    #[test]
    fn small_f2_kernel_matches_enumeration() {
        let f = Field::Prime(2);
        let m = ExactMatrix::from_i64(&f, &[vec![1, 1, 0], vec![0, 1, 1]]);
        let (r, k) = m.rank_and_kernel();
        assert_eq!(r, 2);
        let brute: Vec<Vec<i64>> = (0..8)
            .map(|x| vec![x & 1, (x >> 1) & 1, (x >> 2) & 1])
            .filter(|v| {
                let s: Vec<Scalar> = v.iter().map(|&a| f.from_i64(a)).collect();
                m.apply(&s).unwrap().iter().all(|e| f.is_zero(e))
            })
            .filter(|v| v.iter().any(|&a| a != 0))
            .collect();
        assert_eq!(brute, vec![vec![1, 1, 1]]);
        assert_eq!(k, vec![vec![f.one(), f.one(), f.one()]]);
    }

    #[test]
    fn mixed_fields_rejected() {
        let f = Field::Prime(3);
        let bad = vec![vec![Scalar::Fin(1), Field::Rational.one()]];
        assert!(matches!(ExactMatrix::from_rows(&f, bad), Err(LinalgError::MixedFields)));
        let a = ExactMatrix::identity(&f, 2);
        let b = ExactMatrix::identity(&Field::Prime(5), 2);
        assert!(a.mul(&b).is_err());
    }

    #[test]
    fn sparse_echelon_tracks_rank() {
        let f = Field::Prime(3);
        let m = ExactMatrix::from_i64(&f, &[vec![1, 2, 0, 1], vec![2, 1, 0, 2], vec![0, 1, 1, 0]]);
        let mut se = SparseEchelon::new(&f);
        for r in 0..m.rows() {
            let row = m.row(r).iter().cloned().enumerate().collect();
            se.insert(&row);
        }
        assert_eq!(se.rank(), m.rank());
    }
}
