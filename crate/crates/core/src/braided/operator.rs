use std::collections::HashMap;

use crate::linalg::{kernel_of_images, Field, Matrix, SparseVec, Subspace};

use super::perm::Permutation;
use super::space::{single, BraidedSpace};
use super::word::{add_term, LinComb, Word, WordBasis};
use super::BraidError;

/// Largest degree for which the quantum symmetrizer is built by default.
pub const DEFAULT_FACTORIAL_BUDGET: usize = 7;

/// A linear map between tensor powers, stored by columns over fixed word
/// bases.
///
/// `source` and `target` record the degree pattern (for example `[p, q]` for
/// `V^⊗p ⊗ V^⊗q`); a pattern is identified with the concatenated word basis,
/// so column `j` is the image of the `j`-th source word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedOperator {
    field: Field,
    source: Vec<usize>,
    target: Vec<usize>,
    out_dim: usize,
    columns: Vec<SparseVec>,
}

impl GradedOperator {
    pub fn new(field: Field, source: Vec<usize>, target: Vec<usize>, out_dim: usize, columns: Vec<SparseVec>) -> Self {
        debug_assert!(columns.iter().all(|c| c.max_index().is_none_or(|m| m < out_dim)));
        GradedOperator {
            field,
            source,
            target,
            out_dim,
            columns,
        }
    }

    pub fn identity(field: Field, pattern: Vec<usize>, dim: usize) -> Self {
        let columns = (0..dim).map(|i| SparseVec::unit(i, field)).collect();
        GradedOperator::new(field, pattern.clone(), pattern, dim, columns)
    }

    /// Builds the operator from its action on the words of `basis`; images
    /// must stay inside `basis`.
    fn from_word_map(
        field: Field,
        basis: &WordBasis,
        source: Vec<usize>,
        target: Vec<usize>,
        f: impl Fn(&Word) -> LinComb,
    ) -> Result<Self, BraidError> {
        let columns = basis
            .words()
            .iter()
            .map(|w| {
                basis
                    .vector(&f(w))
                    .ok_or_else(|| BraidError::Shape("operator leaves the chosen word basis".into()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GradedOperator::new(field, source, target, basis.len(), columns))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn source(&self) -> &[usize] {
        &self.source
    }

    pub fn target(&self) -> &[usize] {
        &self.target
    }

    pub fn dim_in(&self) -> usize {
        self.columns.len()
    }

    pub fn dim_out(&self) -> usize {
        self.out_dim
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.columns[j]
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, c) in v.iter() {
            out.axpy(c, &self.columns[j]);
        }
        out
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &GradedOperator) -> Result<GradedOperator, BraidError> {
        if inner.out_dim != self.dim_in() {
            return Err(BraidError::Shape(format!(
                "cannot compose: inner has {} outputs, outer has {} inputs",
                inner.out_dim,
                self.dim_in()
            )));
        }
        let columns = inner.columns.iter().map(|c| self.apply(c)).collect();
        Ok(GradedOperator::new(
            self.field,
            inner.source.clone(),
            self.target.clone(),
            self.out_dim,
            columns,
        ))
    }

    pub fn add(&self, other: &GradedOperator) -> Result<GradedOperator, BraidError> {
        if self.dim_in() != other.dim_in() || self.out_dim != other.out_dim {
            return Err(BraidError::Shape("cannot add operators of different shapes".into()));
        }
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| a.add(b, self.field))
            .collect();
        Ok(GradedOperator::new(
            self.field,
            self.source.clone(),
            self.target.clone(),
            self.out_dim,
            columns,
        ))
    }

    /// Kronecker product `self ⊗ other` on concatenated full word bases.
    pub fn tensor(&self, other: &GradedOperator) -> GradedOperator {
        let mut columns = Vec::with_capacity(self.dim_in() * other.dim_in());
        for a in &self.columns {
            for b in &other.columns {
                columns.push(a.tensor(b, other.out_dim));
            }
        }
        GradedOperator::new(
            self.field,
            [self.source.clone(), other.source.clone()].concat(),
            [self.target.clone(), other.target.clone()].concat(),
            self.out_dim * other.out_dim,
            columns,
        )
    }

    /// The matrix with rows indexed by target words.
    pub fn matrix(&self) -> Matrix {
        Matrix::from_columns(self.field, self.out_dim, &self.columns)
    }

    pub fn rank(&self) -> usize {
        self.image().dim()
    }

    pub fn image(&self) -> Subspace {
        Subspace::span(self.field, self.out_dim, self.columns.iter().cloned())
    }

    pub fn kernel(&self) -> Subspace {
        kernel_of_images(self.field, &self.columns, self.out_dim)
    }

    pub fn is_identity(&self) -> bool {
        self.out_dim == self.dim_in()
            && self
                .columns
                .iter()
                .enumerate()
                .all(|(j, c)| *c == SparseVec::unit(j, self.field))
    }
}

impl BraidedSpace {
    /// `Id^{⊗(i−1)} ⊗ c ⊗ Id^{⊗(n−i−1)}` on `V^⊗n`, with `i` 1-based.
    pub fn sigma(&self, i: usize, n: usize) -> Result<GradedOperator, BraidError> {
        if i == 0 || i >= n {
            return Err(BraidError::IndexOutOfRange { index: i, degree: n });
        }
        let basis = self.basis(n);
        GradedOperator::from_word_map(self.field(), &basis, vec![n], vec![n], |w| {
            self.apply_sigma(&single(w, self.field()), i - 1)
        })
    }

    /// `T_w`: the product of the `σ_i` along the lexicographically smallest
    /// reduced word of `w`.
    pub fn braid_lift(&self, w: &Permutation) -> GradedOperator {
        let n = w.len();
        let word = w.reduced_word();
        self.braid_lift_along(n, &word)
    }

    /// The product of `σ_i` along an explicit word of 1-based generators.
    pub fn braid_lift_along(&self, n: usize, generators: &[usize]) -> GradedOperator {
        let basis = self.basis(n);
        GradedOperator::from_word_map(self.field(), &basis, vec![n], vec![n], |w| {
            self.lift_along(w, generators)
        })
        .expect("full basis is closed under the braiding")
    }

    /// `c_T^{n,m}: V^⊗n ⊗ V^⊗m → V^⊗m ⊗ V^⊗n`.
    pub fn ct_component(&self, n: usize, m: usize) -> GradedOperator {
        let basis = self.basis(n + m);
        GradedOperator::from_word_map(self.field(), &basis, vec![n, m], vec![m, n], |w| self.ct_word(w, n))
            .expect("full basis is closed under the braiding")
    }

    /// The component `V^⊗(p+q) → V^⊗p ⊗ V^⊗q` of the comultiplication of
    /// `T(V, c)`: the sum of the lifts of the `(p, q)` unshuffles.
    pub fn delta_component(&self, p: usize, q: usize) -> GradedOperator {
        let basis = self.basis(p + q);
        GradedOperator::from_word_map(self.field(), &basis, vec![p + q], vec![p, q], |w| self.delta_word(w, p))
            .expect("full basis is closed under the braiding")
    }

    /// `𝔖_n = Σ_{w ∈ S_n} T_w` on `V^⊗n`; fails above `budget`.
    pub fn quantum_symmetrizer(&self, n: usize, budget: usize) -> Result<GradedOperator, BraidError> {
        self.symmetrizer_on(&self.basis(n), budget)
    }

    /// `𝔖_n` restricted to a weight-bounded basis, which the braiding
    /// preserves.
    pub fn symmetrizer_on(&self, basis: &WordBasis, budget: usize) -> Result<GradedOperator, BraidError> {
        let n = basis.degree();
        if n > budget {
            return Err(BraidError::Budget {
                requested: n,
                limit: budget,
            });
        }
        let columns = self.symmetrizer_columns(basis)?;
        Ok(GradedOperator::new(
            self.field(),
            vec![n],
            vec![n],
            basis.len(),
            columns,
        ))
    }

    /// Uses `𝔖_n = (𝔖_{n−1} ⊗ Id)(Id + σ_{n−1} + σ_{n−1}σ_{n−2} + … + σ_{n−1}⋯σ_1)`,
    /// memoizing `𝔖_{n−1}` on prefixes.
    fn symmetrizer_columns(&self, basis: &WordBasis) -> Result<Vec<SparseVec>, BraidError> {
        let n = basis.degree();
        let field = self.field();
        if n <= 1 {
            return Ok((0..basis.len()).map(|i| SparseVec::unit(i, field)).collect());
        }
        let prefix_basis = if basis.is_full() {
            self.basis(n - 1)
        } else {
            let max = basis
                .words()
                .iter()
                .map(|w| w.weight(self.weights()))
                .max()
                .unwrap_or(0);
            self.bounded_basis(n - 1, max)
        };
        let prefix_columns = self.symmetrizer_columns(&prefix_basis)?;
        let mut prefix_terms: HashMap<Word, LinComb> = HashMap::new();
        let mut columns = Vec::with_capacity(basis.len());
        for w in basis.words() {
            // Coset representatives move one letter to the last slot:
            // σ_{n−1}⋯σ_j carries the letter in slot j rightwards.
            let mut coset = LinComb::new();
            for j in 0..n {
                let mut current = single(w, field);
                for i in j..n - 1 {
                    current = self.apply_sigma(&current, i);
                }
                for (k, c) in current {
                    add_term(&mut coset, k, c);
                }
            }
            let mut out = LinComb::new();
            for (word, c) in coset {
                let (prefix, last) = word.split_at(n - 1);
                let terms = prefix_terms.entry(prefix.clone()).or_insert_with(|| {
                    let idx = prefix_basis.index_of(&prefix).expect("prefix lies in the basis");
                    prefix_basis.terms(&prefix_columns[idx])
                });
                for (u, a) in terms.iter() {
                    add_term(&mut out, u.concat(&last), &c * a);
                }
            }
            columns.push(
                basis
                    .vector(&out)
                    .ok_or_else(|| BraidError::Shape("symmetrizer leaves the weight-bounded basis".into()))?,
            );
        }
        Ok(columns)
    }
}
