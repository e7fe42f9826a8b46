//! Dense matrices over a [`FieldContext`] with reduced row echelon form.

use crate::error::{domain, Result};
use crate::field::FieldContext;

/// Dense row-major matrix of field-element indices.
///
/// Entries are not tied to a specific field; operations take the field as a
/// parameter. The derived ordering is lexicographic on the flattened entry
/// sequence for matrices of equal shape, which is the canonical subspace
/// ordering used throughout.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

/// Result of a row reduction.
pub struct Rref {
    /// Canonical matrix: reduced row echelon form, zero rows removed.
    pub matrix: Matrix,
    pub rank: usize,
    /// Pivot columns, strictly increasing.
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u32>], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(domain(format!(
                    "row of length {} in a {}-column matrix",
                    r.len(),
                    cols
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: u32) {
        self.data[r * self.cols + c] = value;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[u32]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// Vertical concatenation; both operands must have equal column count.
    pub fn stack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "stack requires equal column counts");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn mul(&self, other: &Matrix, field: &FieldContext) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b == 0 {
                        continue;
                    }
                    let cur = out.get(i, j);
                    out.set(i, j, field.add(cur, field.mul(a, b)));
                }
            }
        }
        out
    }

    /// Reduced row echelon form: pivot entries 1, zeros above and below the
    /// pivots, zero rows removed. Each row space has exactly one such form.
    pub fn rref(&self, field: &FieldContext) -> Rref {
        let mut work: Vec<Vec<u32>> = self.rows_iter().map(|r| r.to_vec()).collect();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..self.cols {
            let Some(sel) = (r..work.len()).find(|&i| work[i][c] != 0) else {
                continue;
            };
            work.swap(r, sel);
            let inv = field.inv(work[r][c]);
            if inv != 1 {
                for x in work[r].iter_mut() {
                    *x = field.mul(*x, inv);
                }
            }
            for i in 0..work.len() {
                if i != r && work[i][c] != 0 {
                    let factor = work[i][c];
                    for j in 0..self.cols {
                        let t = field.mul(factor, work[r][j]);
                        work[i][j] = field.sub(work[i][j], t);
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == work.len() {
                break;
            }
        }
        work.truncate(r);
        let rank = r;
        let matrix = Matrix::from_rows(&work, self.cols).expect("rows have uniform length");
        Rref {
            matrix,
            rank,
            pivots,
        }
    }

    pub fn rank(&self, field: &FieldContext) -> usize {
        self.rref(field).rank
    }

    /// Basis of the right kernel `{ x : self * x^T = 0 }`, returned as a
    /// canonical rref matrix with one basis vector per row.
    pub fn kernel_basis(&self, field: &FieldContext) -> Matrix {
        let reduced = self.rref(field);
        let pivots = &reduced.pivots;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut rows = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![0u32; self.cols];
            v[f] = 1;
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = field.neg(reduced.matrix.get(i, f));
            }
            rows.push(v);
        }
        let m = Matrix::from_rows(&rows, self.cols).expect("uniform rows");
        m.rref(field).matrix
    }
}
