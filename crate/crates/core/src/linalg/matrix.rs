use std::fmt;

use super::field::{Field, Scalar};
use super::sparse::{EchelonBuilder, SparseVec};
use super::subspace::Subspace;
use super::LinalgError;

/// Fill ratio above which elimination switches to a dense grid.
const DENSE_THRESHOLD: f64 = 0.5;

/// A matrix over one [`Field`], stored as sparse rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl Matrix {
    /// Validates that every entry lies in `field` and inside `cols`.
    pub fn from_rows(field: Field, cols: usize, data: Vec<SparseVec>) -> Result<Self, LinalgError> {
        for row in &data {
            for (j, v) in row.iter() {
                if j >= cols {
                    return Err(LinalgError::Shape(format!(
                        "entry in column {j} of a matrix with {cols} columns"
                    )));
                }
                if v.field() != field {
                    return Err(LinalgError::MixedFields(field, v.field()));
                }
            }
        }
        Ok(Matrix {
            field,
            rows: data.len(),
            cols,
            data,
        })
    }

    pub fn from_dense(field: Field, grid: &[Vec<Scalar>]) -> Result<Self, LinalgError> {
        let cols = grid.first().map_or(0, |r| r.len());
        if grid.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::Shape("ragged rows".into()));
        }
        for v in grid.iter().flatten() {
            if v.field() != field {
                return Err(LinalgError::MixedFields(field, v.field()));
            }
        }
        Ok(Matrix {
            field,
            rows: grid.len(),
            cols,
            data: grid.iter().map(|r| SparseVec::from_dense(r)).collect(),
        })
    }

    pub fn from_i64(field: Field, grid: &[&[i64]]) -> Self {
        let dense: Vec<Vec<Scalar>> = grid
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Self::from_dense(field, &dense).expect("well-formed literal grid")
    }

    pub fn zero(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![SparseVec::new(); rows],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        Matrix {
            field,
            rows: n,
            cols: n,
            data: (0..n).map(|i| SparseVec::unit(i, field)).collect(),
        }
    }

    /// The matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(field: Field, rows: usize, columns: &[SparseVec]) -> Self {
        let mut data: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); rows];
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col.iter() {
                data[i].push((j, v.clone()));
            }
        }
        Matrix {
            field,
            rows,
            cols: columns.len(),
            data: data.into_iter().map(SparseVec::from_pairs).collect(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.data[i]
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i].get(j).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(SparseVec::nnz).sum()
    }

    pub fn density(&self) -> f64 {
        if self.rows == 0 || self.cols == 0 {
            return 0.0;
        }
        self.nnz() as f64 / (self.rows * self.cols) as f64
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_columns(self.field, self.cols, &self.data)
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        SparseVec::from_pairs(
            self.data
                .iter()
                .enumerate()
                .map(|(i, r)| (i, r.dot(v, self.field)))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.field != other.field {
            return Err(LinalgError::MixedFields(self.field, other.field));
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc = SparseVec::new();
                for (k, a) in row.iter() {
                    acc.axpy(a, &other.data[k]);
                }
                acc
            })
            .collect();
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn rank(&self) -> usize {
        rref(self).rank
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub echelon: Matrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// The unique reduced row echelon form of `m`; zero rows are dropped.
pub fn rref(m: &Matrix) -> Rref {
    let rows = if m.density() > DENSE_THRESHOLD {
        rref_dense(m)
    } else {
        rref_sparse(m.field, m.cols, m.data.iter().cloned())
    };
    let pivots: Vec<usize> = rows.iter().map(|r| r.leading().unwrap().0).collect();
    Rref {
        rank: rows.len(),
        echelon: Matrix {
            field: m.field,
            rows: rows.len(),
            cols: m.cols,
            data: rows,
        },
        pivots,
    }
}

/// Sparse elimination followed by back substitution.
pub(crate) fn rref_sparse(field: Field, cols: usize, rows: impl IntoIterator<Item = SparseVec>) -> Vec<SparseVec> {
    let mut builder = EchelonBuilder::new(field, cols);
    for r in rows {
        builder.insert(r);
    }
    back_substitute(builder.into_rows())
}

/// Turns leading-one echelon rows (any order) into canonical reduced form.
pub(crate) fn back_substitute(mut rows: Vec<SparseVec>) -> Vec<SparseVec> {
    rows.sort_by_key(|r| r.leading().map(|(c, _)| c));
    let pivots: std::collections::HashMap<usize, usize> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| (r.leading().unwrap().0, i))
        .collect();
    for i in (0..rows.len()).rev() {
        let own = rows[i].leading().unwrap().0;
        let targets: Vec<(usize, Scalar)> = rows[i]
            .iter()
            .filter(|(c, _)| *c != own)
            .filter_map(|(c, v)| pivots.get(&c).map(|&j| (j, -v)))
            .collect();
        for (j, coef) in targets {
            let (head, tail) = rows.split_at_mut(j);
            head[i].axpy(&coef, &tail[0]);
        }
    }
    rows
}

fn rref_dense(m: &Matrix) -> Vec<SparseVec> {
    let field = m.field;
    let mut grid: Vec<Vec<Scalar>> = m.data.iter().map(|r| r.to_dense(m.cols, field)).collect();
    let mut pivot_row = 0;
    for col in 0..m.cols {
        let Some(found) = (pivot_row..grid.len()).find(|&r| !grid[r][col].is_zero()) else {
            continue;
        };
        grid.swap(pivot_row, found);
        let inv = grid[pivot_row][col].inv().unwrap();
        for v in grid[pivot_row].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot = grid[pivot_row].clone();
        for (r, row) in grid.iter_mut().enumerate() {
            if r == pivot_row || row[col].is_zero() {
                continue;
            }
            let factor = -&row[col];
            for (v, p) in row.iter_mut().zip(&pivot).skip(col) {
                v.add_mul(&factor, p);
            }
        }
        pivot_row += 1;
        if pivot_row == grid.len() {
            break;
        }
    }
    grid.truncate(pivot_row);
    grid.iter().map(|r| SparseVec::from_dense(r)).collect()
}

/// `ker(m) = { x : m x = 0 }` as a canonical subspace of `K^cols`.
pub fn kernel(m: &Matrix) -> Subspace {
    let r = rref(m);
    let field = m.field;
    let pivot_set: std::collections::HashSet<usize> = r.pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|c| !pivot_set.contains(c)) {
        let mut pairs = vec![(free, field.one())];
        for (row, &p) in r.echelon.rows().iter().zip(&r.pivots) {
            if let Some(v) = row.get(free) {
                pairs.push((p, -v));
            }
        }
        basis.push(SparseVec::from_pairs(pairs));
    }
    Subspace::span(field, m.cols, basis)
}

/// Kernel of the linear map sending the `i`-th basis vector of `K^n` to
/// `images[i]`, computed by tracked elimination.
pub fn kernel_of_images(field: Field, images: &[SparseVec], image_dim: usize) -> Subspace {
    let n = images.len();
    let mut builder = EchelonBuilder::new(field, image_dim + n);
    for (i, img) in images.iter().enumerate() {
        let mut v = img.clone();
        v.axpy(&field.one(), &SparseVec::unit(image_dim + i, field));
        builder.insert(v);
    }
    let basis: Vec<SparseVec> = builder
        .into_rows()
        .into_iter()
        .filter(|r| r.leading().unwrap().0 >= image_dim)
        .map(|r| r.map_indices(|c| c - image_dim))
        .collect();
    Subspace::span(field, n, basis)
}

/// Coefficients `c` with `Σ c_i vectors[i] = target`, or `None` when
/// `target` lies outside the span.
pub fn solve_in_span(field: Field, vectors: &[SparseVec], target: &SparseVec, ambient: usize) -> Option<Vec<Scalar>> {
    let n = vectors.len();
    let mut builder = EchelonBuilder::new(field, ambient + n);
    for (i, v) in vectors.iter().enumerate() {
        let mut row = v.clone();
        row.axpy(&field.one(), &SparseVec::unit(ambient + i, field));
        builder.insert(row);
    }
    let rest = builder.reduce(target);
    if rest.iter().any(|(c, _)| c < ambient) {
        return None;
    }
    let mut coefs = vec![field.zero(); n];
    for (c, v) in rest.iter() {
        coefs[c - ambient] = -v;
    }
    Some(coefs)
}

impl Matrix {
    /// The inverse of a square matrix, or `None` when it is singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let augmented = self.data.iter().enumerate().map(|(i, r)| {
            let mut row = r.clone();
            row.axpy(&self.field.one(), &SparseVec::unit(n + i, self.field));
            row
        });
        let rows = rref_sparse(self.field, 2 * n, augmented);
        if rows.len() != n || rows.iter().enumerate().any(|(i, r)| r.leading().unwrap().0 != i) {
            return None;
        }
        let data = rows
            .into_iter()
            .map(|r| {
                SparseVec::from_pairs(
                    r.into_entries()
                        .into_iter()
                        .filter(|(c, _)| *c >= n)
                        .map(|(c, v)| (c - n, v))
                        .collect(),
                )
            })
            .collect();
        Some(Matrix {
            field: self.field,
            rows: n,
            cols: n,
            data,
        })
    }
}
