#![allow(dead_code)]

use braidkit_core::braided::BraidedSpace;
use braidkit_core::linalg::{Field, Matrix, Scalar, SparseVec};

pub fn diag(field: Field, q: &[&[i64]]) -> BraidedSpace {
    let rows: Vec<Vec<Scalar>> = q
        .iter()
        .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
        .collect();
    BraidedSpace::diagonal(field, &rows).unwrap()
}

pub fn flip(d: usize) -> BraidedSpace {
    BraidedSpace::flip(Field::Rationals, d).unwrap()
}

pub fn flip_mod(p: u64, d: usize) -> BraidedSpace {
    BraidedSpace::flip(Field::prime(p).unwrap(), d).unwrap()
}

/// `q11 = 2`, all other `q_ij = 1`.
pub fn stumbo() -> BraidedSpace {
    diag(Field::Rationals, &[&[2, 1], &[1, 1]])
}

/// `q12 = 1`, all other `q_ij = −1`.
pub fn kharchenko() -> BraidedSpace {
    diag(Field::Rationals, &[&[-1, 1], &[-1, -1]])
}

/// `c(x⊗x) = x⊗x`, `c(x⊗y) = (y + x)⊗x`, `c(y⊗x) = x⊗y`,
/// `c(y⊗y) = (y + x)⊗y`.
pub fn jordan() -> BraidedSpace {
    let q = Field::Rationals;
    // Columns: c(x⊗x), c(x⊗y), c(y⊗x), c(y⊗y); rows xx, xy, yx, yy.
    let m = Matrix::from_i64(q, &[&[1, 1, 0, 0], &[0, 0, 1, 1], &[0, 1, 0, 0], &[0, 0, 0, 1]]);
    BraidedSpace::new(q, 2, m).unwrap()
}

/// Hecke type at `q = 2`: `c(x_i⊗x_i) = 2 x_i⊗x_i`, `c(x_1⊗x_2) = x_2⊗x_1`,
/// `c(x_2⊗x_1) = x_1⊗x_2 + 3/2 x_2⊗x_1`.
pub fn hecke() -> BraidedSpace {
    let q = Field::Rationals;
    let cols = vec![
        SparseVec::from_pairs(vec![(0, q.from_i64(2))]),
        SparseVec::from_pairs(vec![(2, q.one())]),
        SparseVec::from_pairs(vec![(1, q.one()), (2, q.parse("3/2").unwrap())]),
        SparseVec::from_pairs(vec![(3, q.from_i64(2))]),
    ];
    BraidedSpace::new(q, 2, Matrix::from_columns(q, 4, &cols)).unwrap()
}

pub fn corpus() -> Vec<(&'static str, BraidedSpace)> {
    vec![
        ("flip-d2", flip(2)),
        ("flip-d3", flip(3)),
        ("flip-gf2", flip_mod(2, 2)),
        ("flip-gf3", flip_mod(3, 2)),
        ("stumbo", stumbo()),
        ("kharchenko", kharchenko()),
        ("jordan", jordan()),
        ("hecke", hecke()),
    ]
}

/// Default truncation: 6 in dimension ≤ 2, 5 in dimension 3.
pub fn max_degree(s: &BraidedSpace) -> usize {
    if s.dim() <= 2 {
        6
    } else {
        5
    }
}
