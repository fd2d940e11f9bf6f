use crate::linalg::{Field, Matrix, Scalar, SparseVec};

use super::perm::Permutation;
use super::word::{add_term, LinComb, Word, WordBasis};
use super::BraidError;

/// A finite-dimensional braided vector space `(V, c)` with basis
/// `x_1, …, x_d`.
///
/// Column `i·d + j` of the braiding matrix is `c(x_i ⊗ x_j)`. Construction
/// checks the braid relation and invertibility. Letters may carry positive
/// integer weights, used when `V` is itself a graded space; the braiding
/// must then preserve total weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidedSpace {
    field: Field,
    dim: usize,
    braiding: Matrix,
    labels: Vec<String>,
    weights: Vec<usize>,
    /// `table[i·d + j]` lists the terms `((k, l), coef)` of `c(x_i ⊗ x_j)`.
    table: Vec<Vec<((u8, u8), Scalar)>>,
    /// `q_ij` when `c(x_i ⊗ x_j) = q_ij x_j ⊗ x_i` for all `i, j`.
    diagonal: Option<Vec<Vec<Scalar>>>,
}

pub fn default_labels(dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("x{i}")).collect()
}

impl BraidedSpace {
    /// Validates shape, field, the braid relation and invertibility.
    pub fn new(field: Field, dim: usize, braiding: Matrix) -> Result<Self, BraidError> {
        let space = Self::unchecked(field, dim, braiding)?;
        if let Some(word) = space.qybe_defect() {
            return Err(BraidError::NotYangBaxter(word.render(&space.labels)));
        }
        let rank = space.braiding.rank();
        if rank != dim * dim {
            return Err(BraidError::NotInvertible { rank, size: dim * dim });
        }
        Ok(space)
    }

    /// Builds the tables without checking the braid relation, so that
    /// [`BraidedSpace::check_qybe`] can be asked about arbitrary matrices.
    pub fn unchecked(field: Field, dim: usize, braiding: Matrix) -> Result<Self, BraidError> {
        if dim == 0 || dim > 255 {
            return Err(BraidError::Shape(format!("dimension {dim} is outside 1..=255")));
        }
        let n = dim * dim;
        if braiding.nrows() != n || braiding.ncols() != n {
            return Err(BraidError::Shape(format!(
                "braiding is {}x{}, expected {n}x{n}",
                braiding.nrows(),
                braiding.ncols()
            )));
        }
        if braiding.field() != field {
            return Err(BraidError::Linalg(crate::linalg::LinalgError::MixedFields(
                field,
                braiding.field(),
            )));
        }
        let columns = braiding.transpose();
        let table: Vec<Vec<((u8, u8), Scalar)>> = columns
            .rows()
            .iter()
            .map(|col| {
                col.iter()
                    .map(|(r, v)| (((r / dim) as u8, (r % dim) as u8), v.clone()))
                    .collect()
            })
            .collect();
        let diagonal = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| match table[i * dim + j].as_slice() {
                        [((k, l), q)] if *k as usize == j && *l as usize == i => Some(q.clone()),
                        _ => None,
                    })
                    .collect::<Option<Vec<Scalar>>>()
            })
            .collect::<Option<Vec<Vec<Scalar>>>>();
        Ok(BraidedSpace {
            field,
            dim,
            braiding,
            labels: default_labels(dim),
            weights: vec![1; dim],
            table,
            diagonal,
        })
    }

    /// `c(x_i ⊗ x_j) = q[i][j] x_j ⊗ x_i`.
    pub fn diagonal(field: Field, q: &[Vec<Scalar>]) -> Result<Self, BraidError> {
        let d = q.len();
        if q.iter().any(|row| row.len() != d) {
            return Err(BraidError::Shape("diagonal braiding must be square".into()));
        }
        let columns: Vec<SparseVec> = (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .map(|(i, j)| SparseVec::from_pairs(vec![(j * d + i, q[i][j].clone())]))
            .collect();
        Self::new(field, d, Matrix::from_columns(field, d * d, &columns))
    }

    /// The flip `u ⊗ v ↦ v ⊗ u`.
    pub fn flip(field: Field, dim: usize) -> Result<Self, BraidError> {
        let one = field.one();
        Self::diagonal(field, &vec![vec![one; dim]; dim])
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, BraidError> {
        if labels.len() != self.dim {
            return Err(BraidError::Shape(format!(
                "{} labels for dimension {}",
                labels.len(),
                self.dim
            )));
        }
        self.labels = labels;
        Ok(self)
    }

    /// Assigns positive letter weights; the braiding must preserve the total
    /// weight of every pair.
    pub fn with_weights(mut self, weights: Vec<usize>) -> Result<Self, BraidError> {
        if weights.len() != self.dim || weights.contains(&0) {
            return Err(BraidError::Weights(format!(
                "need {} positive weights, got {weights:?}",
                self.dim
            )));
        }
        for i in 0..self.dim {
            for j in 0..self.dim {
                let total = weights[i] + weights[j];
                for ((k, l), _) in &self.table[i * self.dim + j] {
                    if weights[*k as usize] + weights[*l as usize] != total {
                        return Err(BraidError::Weights(format!(
                            "c(x{} ⊗ x{}) does not preserve weight",
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
        }
        self.weights = weights;
        Ok(self)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn braiding(&self) -> &Matrix {
        &self.braiding
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.iter().any(|&w| w != 1)
    }

    pub fn diagonal_coefficients(&self) -> Option<&Vec<Vec<Scalar>>> {
        self.diagonal.as_ref()
    }

    /// The full lexicographic basis of `V^⊗n`.
    pub fn basis(&self, n: usize) -> WordBasis {
        WordBasis::full(self.dim, n)
    }

    /// Words of length `n` with total weight at most `max_weight`.
    pub fn bounded_basis(&self, n: usize, max_weight: usize) -> WordBasis {
        WordBasis::bounded(&self.weights, n, max_weight)
    }

    /// Whether `c₁c₂c₁ = c₂c₁c₂` on `V^⊗3`.
    pub fn check_qybe(&self) -> bool {
        self.qybe_defect().is_none()
    }

    /// A word of length 3 on which the two sides of the braid relation
    /// differ, if any.
    pub fn qybe_defect(&self) -> Option<Word> {
        let basis = self.basis(3);
        basis
            .words()
            .iter()
            .find(|w| {
                let start = single(w, self.field);
                let left = self.apply_sigma(&self.apply_sigma(&self.apply_sigma(&start, 0), 1), 0);
                let right = self.apply_sigma(&self.apply_sigma(&self.apply_sigma(&start, 1), 0), 1);
                left != right
            })
            .cloned()
    }

    /// `σ` at the 0-based strand pair `(i, i+1)`, applied to every term.
    pub fn apply_sigma(&self, input: &LinComb, i: usize) -> LinComb {
        let mut out = LinComb::with_capacity(input.len());
        for (w, c) in input {
            let (a, b) = (w.0[i] as usize, w.0[i + 1] as usize);
            for ((k, l), v) in &self.table[a * self.dim + b] {
                let mut next = w.clone();
                next.0[i] = *k;
                next.0[i + 1] = *l;
                add_term(&mut out, next, c * v);
            }
        }
        out
    }

    /// `T_w` along a given word of 1-based generators, rightmost first.
    pub fn lift_along(&self, word: &Word, generators: &[usize]) -> LinComb {
        let mut acc = single(word, self.field);
        for &i in generators.iter().rev() {
            acc = self.apply_sigma(&acc, i - 1);
        }
        acc
    }

    /// The braid lift `T_w` applied to a monomial. Diagonal braidings use
    /// the closed form: one factor `q_ab` per crossing.
    pub fn lift_word(&self, word: &Word, w: &Permutation) -> LinComb {
        match &self.diagonal {
            Some(q) => {
                let mut coef = self.field.one();
                for (p, r) in w.inversions() {
                    coef = &coef * &q[word.0[p] as usize][word.0[r] as usize];
                }
                let mut letters = vec![0u8; word.degree()];
                for (p, &l) in word.0.iter().enumerate() {
                    letters[w.apply(p)] = l;
                }
                let mut out = LinComb::new();
                add_term(&mut out, Word(letters), coef);
                out
            }
            None => self.lift_along(word, &w.reduced_word()),
        }
    }

    /// `c_T^{n,m}` applied to a monomial of length `n + m`.
    pub fn ct_word(&self, word: &Word, n: usize) -> LinComb {
        let m = word.degree() - n;
        self.lift_word(word, &Permutation::block_crossing(n, m))
    }

    /// The `(p, q)` component of `Δ_T` applied to a monomial of length
    /// `p + q`; result words are split after position `p`.
    pub fn delta_word(&self, word: &Word, p: usize) -> LinComb {
        let q = word.degree() - p;
        let mut out = LinComb::new();
        for w in Permutation::unshuffles(p, q) {
            for (u, c) in self.lift_word(word, &w) {
                add_term(&mut out, u, c);
            }
        }
        out
    }
}

pub(crate) fn single(word: &Word, field: Field) -> LinComb {
    let mut out = LinComb::new();
    out.insert(word.clone(), field.one());
    out
}
