//! Dense Gaussian elimination over a finite field.

use crate::field::{Field, FieldElement};

/// A dense row-major matrix over `F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    cols: usize,
    rows: Vec<Vec<FieldElement>>,
}

impl Matrix {
    /// Matrix with `cols` columns and no rows.
    pub fn new(cols: usize) -> Self {
        Self { cols, rows: Vec::new() }
    }

    /// Matrix from rows, each padded or cut to `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<FieldElement>>) -> Self {
        let mut m = Self::new(cols);
        for r in rows {
            m.push_row(r);
        }
        m
    }

    /// Appends a row (padded with zeros to the column count).
    pub fn push_row(&mut self, mut row: Vec<FieldElement>) {
        row.resize(self.cols, FieldElement::ZERO);
        self.rows.push(row);
    }

    /// Number of rows.
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    /// Number of columns.
    pub fn ncols(&self) -> usize {
        self.cols
    }

    /// Row `i`.
    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.rows[i]
    }

    /// All rows.
    pub fn rows(&self) -> &[Vec<FieldElement>] {
        &self.rows
    }

    /// Reduces to reduced row echelon form in place, dropping zero rows, and
    /// returns the pivot columns in increasing order.
    pub fn rref(&mut self, field: &Field) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        let nrows = self.rows.len();
        for c in 0..self.cols {
            if r == nrows {
                break;
            }
            let Some(k) = (r..nrows).find(|&k| !self.rows[k][c].is_zero()) else {
                continue;
            };
            self.rows.swap(r, k);
            let inv = field.inv(self.rows[r][c]).expect("pivot is nonzero");
            for v in self.rows[r][c..].iter_mut() {
                *v = field.mul(*v, inv);
            }
            let pivot_row = std::mem::take(&mut self.rows[r]);
            for (k, row) in self.rows.iter_mut().enumerate() {
                if k == r {
                    continue;
                }
                let factor = row[c];
                if factor.is_zero() {
                    continue;
                }
                let neg = field.neg(factor);
                for (x, &y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    if !y.is_zero() {
                        *x = field.mul_add(*x, neg, y);
                    }
                }
            }
            self.rows[r] = pivot_row;
            pivots.push(c);
            r += 1;
        }
        self.rows.truncate(r);
        pivots
    }

    /// Rank.
    pub fn rank(&self, field: &Field) -> usize {
        self.clone().rref(field).len()
    }

    /// A basis of `{x : Ax = 0}`.
    pub fn nullspace(&self, field: &Field) -> Vec<Vec<FieldElement>> {
        let mut m = self.clone();
        let pivots = m.rref(field);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![FieldElement::ZERO; self.cols];
                v[fc] = FieldElement::ONE;
                for (row, &pc) in m.rows.iter().zip(&pivots) {
                    v[pc] = field.neg(row[fc]);
                }
                v
            })
            .collect()
    }

    /// One solution of `Ax = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, field: &Field, b: &[FieldElement]) -> Option<Vec<FieldElement>> {
        assert_eq!(b.len(), self.rows.len(), "right-hand side length");
        let mut aug = Matrix::new(self.cols + 1);
        for (row, &bi) in self.rows.iter().zip(b) {
            let mut r = row.clone();
            r.push(bi);
            aug.push_row(r);
        }
        let pivots = aug.rref(field);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![FieldElement::ZERO; self.cols];
        for (row, &pc) in aug.rows.iter().zip(&pivots) {
            x[pc] = row[self.cols];
        }
        Some(x)
    }
}

/// Rank of a list of vectors.
pub fn rank_of(field: &Field, vectors: &[Vec<FieldElement>]) -> usize {
    let cols = vectors.iter().map(|v| v.len()).max().unwrap_or(0);
    Matrix::from_rows(cols, vectors.to_vec()).rank(field)
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span(field: &Field, basis: &[Vec<FieldElement>], v: &[FieldElement]) -> bool {
    let mut all = basis.to_vec();
    let r = rank_of(field, &all);
    all.push(v.to_vec());
    rank_of(field, &all) == r
}

/// Whether two lists of vectors span the same subspace.
pub fn same_span(field: &Field, a: &[Vec<FieldElement>], b: &[Vec<FieldElement>]) -> bool {
    let ra = rank_of(field, a);
    let rb = rank_of(field, b);
    let mut both = a.to_vec();
    both.extend_from_slice(b);
    ra == rb && rank_of(field, &both) == ra
}
