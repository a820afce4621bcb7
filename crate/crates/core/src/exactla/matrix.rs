//! Sparse matrices over a cyclotomic field and exact row reduction.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactla::{CyclotomicField, Scalar};

/// A sparse row: `(column, value)` pairs sorted by column, no zeros.
pub type SparseRow = Vec<(usize, Scalar)>;

/// A sparse matrix whose entries all live in one cyclotomic field.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    field: Arc<CyclotomicField>,
    data: Vec<SparseRow>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize, field: &Arc<CyclotomicField>) -> Self {
        ExactMatrix {
            rows,
            cols,
            field: field.clone(),
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(size: usize, field: &Arc<CyclotomicField>) -> Self {
        let mut m = Self::zeros(size, size, field);
        for (i, row) in m.data.iter_mut().enumerate() {
            row.push((i, Scalar::one(field)));
        }
        m
    }

    /// Builds a matrix from `(row, col, value)` triples; repeated positions
    /// are summed and zeros dropped.
    pub fn from_entries<I>(
        rows: usize,
        cols: usize,
        field: &Arc<CyclotomicField>,
        entries: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Scalar)>,
    {
        let mut acc: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); rows];
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(Error::Shape(format!(
                    "entry ({r}, {c}) outside a {rows}x{cols} matrix"
                )));
            }
            if v.order() != field.order() {
                return Err(Error::FieldMismatch {
                    left: field.order(),
                    right: v.order(),
                });
            }
            match acc[r].get_mut(&c) {
                Some(old) => *old = &*old + &v,
                None => {
                    acc[r].insert(c, v);
                }
            }
        }
        let data = acc
            .into_iter()
            .map(|row| row.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        Ok(ExactMatrix {
            rows,
            cols,
            field: field.clone(),
            data,
        })
    }

    /// Integer matrix given densely, row by row.
    pub fn from_i64_rows(field: &Arc<CyclotomicField>, dense: &[Vec<i64>]) -> Self {
        let rows = dense.len();
        let cols = dense.first().map_or(0, |r| r.len());
        let entries = dense.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(move |(j, &v)| (i, j, Scalar::from_i64(field, v)))
        });
        Self::from_entries(rows, cols, field, entries).expect("dense input is in range")
    }

    /// Matrix with the given sparse rows. Rows must be sorted by column.
    pub fn from_rows(
        cols: usize,
        field: &Arc<CyclotomicField>,
        rows: Vec<SparseRow>,
    ) -> Result<Self> {
        let entries: Vec<_> = rows
            .into_iter()
            .enumerate()
            .flat_map(|(i, row)| row.into_iter().map(move |(j, v)| (i, j, v)))
            .collect();
        let nrows = entries.iter().map(|e| e.0 + 1).max().unwrap_or(0);
        Self::from_entries(nrows, cols, field, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn row(&self, i: usize) -> &SparseRow {
        &self.data[i]
    }

    /// All stored entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        match self.data[i].binary_search_by_key(&j, |(c, _)| *c) {
            Ok(idx) => self.data[i][idx].1.clone(),
            Err(_) => Scalar::zero(&self.field),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<SparseRow> = vec![Vec::new(); self.cols];
        for (i, j, v) in self.entries() {
            data[j].push((i, v.clone()));
        }
        ExactMatrix {
            rows: self.cols,
            cols: self.rows,
            field: self.field.clone(),
            data,
        }
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        self.data
            .iter()
            .map(|row| {
                let mut acc = Scalar::zero(&self.field);
                for (j, x) in row {
                    acc = acc.checked_add(&x.checked_mul(&v[*j])?)?;
                }
                Ok(acc)
            })
            .collect()
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = Vec::new();
        for (i, row) in self.data.iter().enumerate() {
            for (k, a) in row {
                for (j, b) in &other.data[*k] {
                    entries.push((i, *j, a.checked_mul(b)?));
                }
            }
        }
        ExactMatrix::from_entries(self.rows, other.cols, &self.field, entries)
    }

    pub fn add(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape("adding matrices of different shapes".into()));
        }
        let entries = self
            .entries()
            .chain(other.entries())
            .map(|(i, j, v)| (i, j, v.clone()))
            .collect::<Vec<_>>();
        ExactMatrix::from_entries(self.rows, self.cols, &self.field, entries)
    }

    pub fn scale(&self, factor: &Scalar) -> Result<ExactMatrix> {
        let entries = self
            .entries()
            .map(|(i, j, v)| Ok((i, j, v.checked_mul(factor)?)))
            .collect::<Result<Vec<_>>>()?;
        ExactMatrix::from_entries(self.rows, self.cols, &self.field, entries)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.cols {
            return Err(Error::Shape(
                "stacking matrices with different widths".into(),
            ));
        }
        let mut out = self.clone();
        out.rows += other.rows;
        out.data.extend(other.data.iter().cloned());
        Ok(out)
    }

    pub fn trace(&self) -> Scalar {
        let mut acc = Scalar::zero(&self.field);
        for i in 0..self.rows.min(self.cols) {
            acc = &acc + &self.get(i, i);
        }
        acc
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn rank(&self) -> usize {
        Echelon::of(self).rank()
    }
}

/// `row -= factor * pivot`, both sparse and sorted.
fn sub_scaled(row: &SparseRow, factor: &Scalar, pivot: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut a, mut b) = (row.iter().peekable(), pivot.iter().peekable());
    loop {
        match (a.peek(), b.peek()) {
            (Some((ca, va)), Some((cb, vb))) => {
                if ca < cb {
                    out.push((*ca, va.clone()));
                    a.next();
                } else if cb < ca {
                    out.push((*cb, -&(factor * vb)));
                    b.next();
                } else {
                    let v = va - &(factor * vb);
                    if !v.is_zero() {
                        out.push((*ca, v));
                    }
                    a.next();
                    b.next();
                }
            }
            (Some((ca, va)), None) => {
                out.push((*ca, va.clone()));
                a.next();
            }
            (None, Some((cb, vb))) => {
                out.push((*cb, -&(factor * vb)));
                b.next();
            }
            (None, None) => break,
        }
    }
    out
}

/// Reduced row echelon form of the row space of a matrix.
///
/// Pivot columns are increasing and every pivot row has leading entry one
/// with zeros in all other pivot columns, so the result is unique.
#[derive(Clone, Debug)]
pub struct Echelon {
    cols: usize,
    field: Arc<CyclotomicField>,
    pivots: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new(cols: usize, field: &Arc<CyclotomicField>) -> Self {
        Echelon {
            cols,
            field: field.clone(),
            pivots: BTreeMap::new(),
        }
    }

    pub fn of(m: &ExactMatrix) -> Self {
        let mut e = Echelon::new(m.cols, &m.field);
        for row in &m.data {
            e.insert(row.clone());
        }
        e.finish();
        e
    }

    /// Reduces `row` against the current pivots by leading terms.
    fn reduce_leading(&self, mut row: SparseRow) -> SparseRow {
        let mut start = 0;
        while start < row.len() {
            let (c, v) = (row[start].0, row[start].1.clone());
            match self.pivots.get(&c) {
                Some(p) => {
                    let tail: SparseRow = row[start..].to_vec();
                    let reduced = sub_scaled(&tail, &v, p);
                    row.truncate(start);
                    row.extend(reduced);
                }
                None => start += 1,
            }
        }
        row
    }

    /// Adds a row to the span. Returns true if the rank grew.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let mut row = row;
        // Leading-term reduction: only pivots at the current lead matter.
        loop {
            let Some((c, v)) = row.first().cloned() else {
                return false;
            };
            match self.pivots.get(&c) {
                Some(p) => row = sub_scaled(&row, &v, p),
                None => {
                    let inv = v.inv().expect("leading entry is nonzero");
                    let normalized = row.into_iter().map(|(j, x)| (j, &x * &inv)).collect();
                    self.pivots.insert(c, normalized);
                    return true;
                }
            }
        }
    }

    /// Back-substitution to fully reduced form.
    pub fn finish(&mut self) {
        let cols: Vec<usize> = self.pivots.keys().rev().copied().collect();
        for &c in &cols {
            let p = self.pivots[&c].clone();
            let above: Vec<usize> = self.pivots.range(..c).map(|(k, _)| *k).collect();
            for k in above {
                let row = &self.pivots[&k];
                if let Ok(idx) = row.binary_search_by_key(&c, |(j, _)| *j) {
                    let factor = row[idx].1.clone();
                    let new_row = sub_scaled(row, &factor, &p);
                    self.pivots.insert(k, new_row);
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseRow> {
        self.pivots.values()
    }

    /// True when `row` lies in the span.
    pub fn contains(&self, row: &SparseRow) -> bool {
        self.reduce_leading(row.clone()).is_empty()
    }

    /// Normal form of `row` modulo the span: the residue has no entries in
    /// pivot columns. Requires `finish` to have been called.
    pub fn normal_form(&self, row: &SparseRow) -> SparseRow {
        let mut out = row.clone();
        for (c, p) in &self.pivots {
            if let Ok(idx) = out.binary_search_by_key(c, |(j, _)| *j) {
                let factor = out[idx].1.clone();
                out = sub_scaled(&out, &factor, p);
            }
        }
        out
    }

    /// Canonical basis of the right nullspace: one vector per free column,
    /// with a one in that column and zeros in the other free columns.
    pub fn nullspace_basis(&self) -> Vec<Vec<Scalar>> {
        let zero = Scalar::zero(&self.field);
        let free: Vec<usize> = (0..self.cols)
            .filter(|c| !self.pivots.contains_key(c))
            .collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![zero.clone(); self.cols];
                v[f] = Scalar::one(&self.field);
                for (c, row) in &self.pivots {
                    if let Ok(idx) = row.binary_search_by_key(&f, |(j, _)| *j) {
                        v[*c] = -&row[idx].1;
                    }
                }
                v
            })
            .collect()
    }
}

/// Rank and canonical nullspace basis of a matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Nullspace {
    pub rank: usize,
    pub basis: Vec<Vec<Scalar>>,
}

impl Nullspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Exact rank and right nullspace (`M v = 0`) of `m`.
pub fn nullspace(m: &ExactMatrix) -> Nullspace {
    let e = Echelon::of(m);
    Nullspace {
        rank: e.rank(),
        basis: e.nullspace_basis(),
    }
}

/// Rank of a list of dense vectors.
pub fn rank_of_vectors(field: &Arc<CyclotomicField>, vectors: &[Vec<Scalar>]) -> usize {
    let mut e = Echelon::new(vectors.first().map_or(0, |v| v.len()), field);
    for v in vectors {
        e.insert(dense_to_sparse(v));
    }
    e.rank()
}

pub fn dense_to_sparse(v: &[Scalar]) -> SparseRow {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(j, x)| (j, x.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{cyclotomic_field, rational_field};

    #[test]
    fn identity_has_full_rank() {
        let k = rational_field();
        let ns = nullspace(&ExactMatrix::identity(3, &k));
        assert_eq!(ns.rank, 3);
        assert!(ns.basis.is_empty());
    }

    #[test]
    fn all_ones_two_by_two() {
        let k = rational_field();
        let m = ExactMatrix::from_i64_rows(&k, &[vec![1, 1], vec![1, 1]]);
        let ns = nullspace(&m);
        assert_eq!(ns.rank, 1);
        assert_eq!(
            ns.basis,
            vec![vec![Scalar::from_i64(&k, -1), Scalar::from_i64(&k, 1)]]
        );
        // (1, -1) up to the canonical scaling.
        assert!(m.mul_vec(&ns.basis[0]).unwrap().iter().all(|x| x.is_zero()));
    }

    #[test]
    fn echelon_is_order_independent() {
        let k = rational_field();
        let a =
            ExactMatrix::from_i64_rows(&k, &[vec![0, 2, 4, 1], vec![1, 1, 1, 1], vec![1, 3, 5, 2]]);
        let b =
            ExactMatrix::from_i64_rows(&k, &[vec![1, 3, 5, 2], vec![0, 2, 4, 1], vec![1, 1, 1, 1]]);
        assert_eq!(nullspace(&a), nullspace(&b));
        assert_eq!(nullspace(&a).rank, 2);
    }

    #[test]
    fn cyclotomic_entries() {
        let k = cyclotomic_field(3).unwrap();
        let q = Scalar::generator(&k);
        let one = Scalar::one(&k);
        // [[1, q], [q^2, 1]] has rank 1 since q^3 = 1.
        let m = ExactMatrix::from_entries(
            2,
            2,
            &k,
            vec![
                (0, 0, one.clone()),
                (0, 1, q.clone()),
                (1, 0, q.pow(2).unwrap()),
                (1, 1, one),
            ],
        )
        .unwrap();
        let ns = nullspace(&m);
        assert_eq!(ns.rank, 1);
        assert!(m.mul_vec(&ns.basis[0]).unwrap().iter().all(|x| x.is_zero()));
    }

    #[test]
    fn normal_form_kills_span() {
        let k = rational_field();
        let m = ExactMatrix::from_i64_rows(&k, &[vec![1, -1, 0], vec![0, 1, -1]]);
        let e = Echelon::of(&m);
        let nf = e.normal_form(&dense_to_sparse(&[
            Scalar::from_i64(&k, 1),
            Scalar::zero(&k),
            Scalar::zero(&k),
        ]));
        assert_eq!(nf, vec![(2, Scalar::from_i64(&k, 1))]);
        assert!(e.contains(&dense_to_sparse(&[
            Scalar::from_i64(&k, 2),
            Scalar::zero(&k),
            Scalar::from_i64(&k, -2),
        ])));
    }
}
