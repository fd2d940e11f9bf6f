//! Braided vector spaces, the braid group action on tensor powers, and the
//! graded pieces of the braided tensor algebra `T(V, c)`: the braiding
//! `c_T`, the comultiplication components `Δ_{p,q}` and the quantum
//! symmetrizer.
//!
//! Words are ordered lexicographically with `x_1 < x_2 < …`, and
//! `V^⊗p ⊗ V^⊗q` is identified with `V^⊗(p+q)` by concatenation, so every
//! operator is a square matrix on one word basis.

mod cache;
mod operator;
mod perm;
mod space;
mod word;

pub use cache::OperatorCache;
pub use operator::{GradedOperator, DEFAULT_FACTORIAL_BUDGET};
pub use perm::Permutation;
pub use space::{default_labels, BraidedSpace};
pub use word::{lex_rank, unrank, LinComb, TensorElement, Word, WordBasis};

pub(crate) use word::{add_term, render_terms};

use thiserror::Error;

use crate::linalg::LinalgError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BraidError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("braiding violates the braid relation on {0}")]
    NotYangBaxter(String),
    #[error("braiding is not invertible: rank {rank} < {size}")]
    NotInvertible { rank: usize, size: usize },
    #[error("strand index {index} out of range for degree {degree}")]
    IndexOutOfRange { index: usize, degree: usize },
    #[error("degree {requested} exceeds the factorial budget {limit}")]
    Budget { requested: usize, limit: usize },
    #[error("invalid weights: {0}")]
    Weights(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{Field, Matrix};

    fn kharchenko() -> BraidedSpace {
        let q = Field::Rationals;
        let m = q.from_i64(-1);
        BraidedSpace::diagonal(q, &[vec![m.clone(), q.one()], vec![m.clone(), m]]).unwrap()
    }

    #[test]
    fn qybe_examples() {
        let q = Field::Rationals;
        assert!(BraidedSpace::flip(q, 2).unwrap().check_qybe());
        assert!(kharchenko().check_qybe());
        let broken = Matrix::from_i64(q, &[&[1, 0, 0, 0], &[0, 2, 1, 0], &[0, 1, 0, 0], &[0, 0, 0, 1]]);
        let s = BraidedSpace::unchecked(q, 2, broken.clone()).unwrap();
        assert!(!s.check_qybe());
        assert!(matches!(
            BraidedSpace::new(q, 2, broken),
            Err(BraidError::NotYangBaxter(_))
        ));
    }

    #[test]
    fn rejects_singular_braiding() {
        let q = Field::Rationals;
        let zero = Matrix::zero(q, 4, 4);
        assert!(matches!(
            BraidedSpace::new(q, 2, zero),
            Err(BraidError::NotInvertible { rank: 0, size: 4 })
        ));
    }

    #[test]
    fn sigma_examples() {
        let q = Field::Rationals;
        let s = kharchenko();
        assert_eq!(s.sigma(1, 2).unwrap().matrix(), *s.braiding());
        let flip = BraidedSpace::flip(q, 2).unwrap();
        let s2 = flip.sigma(2, 3).unwrap();
        for (j, w) in flip.basis(3).words().iter().enumerate() {
            let swapped = Word(vec![w.0[0], w.0[2], w.0[1]]);
            let i = lex_rank(&swapped, 2);
            assert_eq!(s2.column(j), &crate::linalg::SparseVec::unit(i, q));
        }
        assert!(matches!(s.sigma(3, 3), Err(BraidError::IndexOutOfRange { .. })));
        assert!(matches!(s.sigma(0, 3), Err(BraidError::IndexOutOfRange { .. })));
    }

    #[test]
    fn lift_and_ct_small_cases() {
        let s = kharchenko();
        assert!(s.braid_lift(&Permutation::identity(3)).is_identity());
        assert_eq!(s.braid_lift(&Permutation::simple(1, 2)).matrix(), *s.braiding());
        assert!(s.ct_component(3, 0).is_identity());
        assert!(s.ct_component(0, 2).is_identity());
        assert_eq!(s.ct_component(1, 1).matrix(), *s.braiding());
    }

    #[test]
    fn ct_two_one_for_flip_is_cyclic() {
        let q = Field::Rationals;
        let flip = BraidedSpace::flip(q, 2).unwrap();
        let op = flip.ct_component(2, 1);
        for (j, w) in flip.basis(3).words().iter().enumerate() {
            let moved = Word(vec![w.0[2], w.0[0], w.0[1]]);
            assert_eq!(op.column(j), &crate::linalg::SparseVec::unit(lex_rank(&moved, 2), q));
        }
    }

    #[test]
    fn delta_small_cases() {
        let s = kharchenko();
        let id_plus_c = GradedOperator::identity(s.field(), vec![2], 4)
            .add(&s.sigma(1, 2).unwrap())
            .unwrap();
        assert_eq!(s.delta_component(1, 1).columns(), id_plus_c.columns());
        assert!(s.delta_component(3, 0).is_identity());
        assert!(s.delta_component(0, 3).is_identity());

        let q = Field::Rationals;
        let line = BraidedSpace::flip(q, 1).unwrap();
        let d21 = line.delta_component(2, 1);
        assert_eq!(d21.column(0).entries(), &[(0, q.from_i64(3))]);
    }

    #[test]
    fn symmetrizer_small_cases() {
        let s = kharchenko();
        assert!(s.quantum_symmetrizer(0, 7).unwrap().is_identity());
        assert!(s.quantum_symmetrizer(1, 7).unwrap().is_identity());
        let s2 = s.quantum_symmetrizer(2, 7).unwrap();
        assert_eq!(s2.columns(), s.delta_component(1, 1).columns());
        assert_eq!(s2.rank(), 2);
        assert!(matches!(
            s.quantum_symmetrizer(8, 7),
            Err(BraidError::Budget { requested: 8, limit: 7 })
        ));
    }

    #[test]
    fn symmetrizer_matches_sum_of_lifts() {
        let q = Field::Rationals;
        let stumbo = BraidedSpace::diagonal(q, &[vec![q.from_i64(2), q.one()], vec![q.one(), q.one()]]).unwrap();
        for s in [kharchenko(), stumbo] {
            for n in 2..=4 {
                let sym = s.quantum_symmetrizer(n, 7).unwrap();
                let mut sum = GradedOperator::new(
                    q,
                    vec![n],
                    vec![n],
                    1 << n,
                    vec![crate::linalg::SparseVec::new(); 1 << n],
                );
                for w in Permutation::all(n) {
                    sum = sum.add(&s.braid_lift(&w)).unwrap();
                }
                assert_eq!(sym, sum);
            }
        }
    }

    #[test]
    fn diagonal_fast_path_matches_sigma_products() {
        let s = kharchenko();
        for w in Permutation::all(4) {
            for word in s.basis(4).words() {
                assert_eq!(s.lift_word(word, &w), s.lift_along(word, &w.reduced_word()));
            }
        }
    }

    #[test]
    fn weighted_symmetrizer_restricts() {
        let q = Field::Rationals;
        let s = BraidedSpace::flip(q, 2).unwrap().with_weights(vec![1, 2]).unwrap();
        let basis = s.bounded_basis(3, 4);
        let sym = s.symmetrizer_on(&basis, 7).unwrap();
        assert_eq!(sym.dim_in(), basis.len());
        // Commutative monomials of weight ≤ 4 in three letters: x1³, x1²x2.
        assert_eq!(sym.rank(), 2);
    }
}
