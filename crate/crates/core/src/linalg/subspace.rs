use super::field::{Field, Scalar};
use super::matrix::{back_substitute, kernel_of_images, rref_sparse};
use super::sparse::{EchelonBuilder, SparseVec};
use super::LinalgError;

/// A subspace of `K^ambient` held in reduced row echelon form.
///
/// The representation is canonical: basis rows are sorted by pivot, every
/// pivot entry is 1 and every pivot column is zero in the other rows, so two
/// subspaces are equal iff the structs are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    rows: Vec<SparseVec>,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            rows: Vec::new(),
        }
    }

    pub fn full(field: Field, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            rows: (0..ambient).map(|i| SparseVec::unit(i, field)).collect(),
        }
    }

    /// The span of arbitrary vectors (zero vectors allowed).
    pub fn span(field: Field, ambient: usize, vectors: impl IntoIterator<Item = SparseVec>) -> Self {
        Subspace {
            field,
            ambient,
            rows: rref_sparse(field, ambient, vectors),
        }
    }

    /// Canonicalizes the rows of an [`EchelonBuilder`].
    pub fn from_echelon(builder: EchelonBuilder) -> Self {
        let field = builder.field();
        let ambient = builder.ambient();
        Subspace {
            field,
            ambient,
            rows: back_substitute(builder.into_rows()),
        }
    }

    /// Coordinates spanned by the unit vectors `indices`.
    pub fn coordinate(field: Field, ambient: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut idx: Vec<usize> = indices.into_iter().collect();
        idx.sort_unstable();
        idx.dedup();
        Subspace {
            field,
            ambient,
            rows: idx.into_iter().map(|i| SparseVec::unit(i, field)).collect(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient - self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.leading().unwrap().0).collect()
    }

    /// Columns that are not pivots; their unit vectors span a complement.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for p in self.pivots() {
            is_pivot[p] = true;
        }
        (0..self.ambient).filter(|&c| !is_pivot[c]).collect()
    }

    /// Remainder of `v` modulo the subspace, supported on free columns.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut out = v.clone();
        for row in &self.rows {
            let p = row.leading().unwrap().0;
            if let Some(c) = v.get(p) {
                let c = -c;
                out.axpy(&c, row);
            }
        }
        out
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Coefficients of `v` in the echelon basis, or `None` if `v` is outside.
    pub fn coordinates(&self, v: &SparseVec) -> Option<Vec<Scalar>> {
        let coords: Vec<Scalar> = self
            .rows
            .iter()
            .map(|r| {
                v.get(r.leading().unwrap().0)
                    .cloned()
                    .unwrap_or_else(|| self.field.zero())
            })
            .collect();
        let mut rebuilt = SparseVec::new();
        for (c, r) in coords.iter().zip(&self.rows) {
            rebuilt.axpy(c, r);
        }
        (rebuilt == *v).then_some(coords)
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch(self.ambient, other.ambient));
        }
        if self.field != other.field {
            return Err(LinalgError::MixedFields(self.field, other.field));
        }
        Ok(())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.rows.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        if other.is_subspace_of(self) {
            return Ok(self.clone());
        }
        Ok(Subspace::span(
            self.field,
            self.ambient,
            self.rows.iter().chain(&other.rows).cloned(),
        ))
    }

    /// Intersection from the kernel of `(a, b) ↦ Σ aᵢAᵢ − Σ bⱼBⱼ`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        let minus = -self.field.one();
        let images: Vec<SparseVec> = self
            .rows
            .iter()
            .cloned()
            .chain(other.rows.iter().map(|r| r.scaled(&minus)))
            .collect();
        let relations = kernel_of_images(self.field, &images, self.ambient);
        let k = self.rows.len();
        let vectors = relations.basis().iter().map(|rel| {
            let mut v = SparseVec::new();
            for (i, c) in rel.iter().take_while(|(i, _)| *i < k) {
                v.axpy(c, &self.rows[i]);
            }
            v
        });
        Ok(Subspace::span(self.field, self.ambient, vectors))
    }

    /// `dim self − dim sub`, requiring `sub ⊆ self`.
    pub fn quotient_dim(&self, sub: &Subspace) -> Result<usize, LinalgError> {
        self.check_ambient(sub)?;
        if !sub.is_subspace_of(self) {
            return Err(LinalgError::NotContained);
        }
        Ok(self.dim() - sub.dim())
    }

    /// `self ⊗ other` inside `K^(ambient · other.ambient)`.
    pub fn tensor(&self, other: &Subspace) -> Subspace {
        let rows = self
            .rows
            .iter()
            .flat_map(|a| other.rows.iter().map(move |b| a.tensor(b, other.ambient)))
            .collect();
        // Kronecker products of canonical bases are already canonical.
        Subspace {
            field: self.field,
            ambient: self.ambient * other.ambient,
            rows,
        }
    }

    /// Image under an index map into a larger ambient space.
    pub fn embed(&self, ambient: usize, f: impl Fn(usize) -> usize) -> Subspace {
        Subspace::span(self.field, ambient, self.rows.iter().map(|r| r.map_indices(&f)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vecq(v: &[i64]) -> SparseVec {
        let q = Field::Rationals;
        SparseVec::from_dense(&v.iter().map(|&x| q.from_i64(x)).collect::<Vec<_>>())
    }

    #[test]
    fn sum_and_intersection_of_axes() {
        let q = Field::Rationals;
        let a = Subspace::span(q, 2, vec![vecq(&[1, 0])]);
        let b = Subspace::span(q, 2, vec![vecq(&[0, 1])]);
        assert_eq!(a.sum(&b).unwrap().dim(), 2);
        assert_eq!(a.intersect(&b).unwrap().dim(), 0);
        assert_eq!(a.intersect(&a).unwrap(), a);
    }

    #[test]
    fn intersection_hand_example() {
        let q = Field::Rationals;
        let a = Subspace::span(q, 2, vec![vecq(&[1, 1]), vecq(&[0, 1])]);
        let b = Subspace::span(q, 2, vec![vecq(&[1, 0])]);
        assert_eq!(a.intersect(&b).unwrap(), b);
    }

    #[test]
    fn tensor_is_canonical() {
        let q = Field::Rationals;
        let a = Subspace::span(q, 2, vec![vecq(&[1, 2])]);
        let b = Subspace::span(q, 3, vec![vecq(&[0, 1, 1]), vecq(&[1, 0, 3])]);
        let t = a.tensor(&b);
        let respanned = Subspace::span(q, 6, t.basis().to_vec());
        assert_eq!(t, respanned);
    }

    #[test]
    fn quotient_dim_requires_containment() {
        let q = Field::Rationals;
        let a = Subspace::span(q, 3, vec![vecq(&[1, 0, 0]), vecq(&[0, 1, 0])]);
        let b = Subspace::span(q, 3, vec![vecq(&[1, 1, 0])]);
        assert_eq!(a.quotient_dim(&b).unwrap(), 1);
        let c = Subspace::span(q, 3, vec![vecq(&[0, 0, 1])]);
        assert!(matches!(a.quotient_dim(&c), Err(LinalgError::NotContained)));
        assert!(matches!(
            a.sum(&Subspace::zero(q, 4)),
            Err(LinalgError::AmbientMismatch(3, 4))
        ));
    }

    #[test]
    fn coordinates_round_trip() {
        let q = Field::Rationals;
        let a = Subspace::span(q, 3, vec![vecq(&[1, 2, 0]), vecq(&[0, 1, 1])]);
        let v = vecq(&[2, 3, -1]);
        let c = a.coordinates(&v).unwrap();
        assert_eq!(c.len(), 2);
        assert!(a.coordinates(&vecq(&[0, 0, 1])).is_none());
    }
}
