use std::collections::HashMap;

use super::field::{Field, Scalar};

/// A sparse vector: `(index, value)` pairs, strictly increasing indices,
/// never an explicit zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SparseVec {
    entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(index: usize, field: Field) -> Self {
        SparseVec {
            entries: vec![(index, field.one())],
        }
    }

    /// Builds a vector from arbitrary pairs: sorts, merges duplicates and
    /// drops zeros.
    pub fn from_pairs(mut pairs: Vec<(usize, Scalar)>) -> Self {
        pairs.sort_by_key(|(i, _)| *i);
        let mut entries: Vec<(usize, Scalar)> = Vec::with_capacity(pairs.len());
        for (i, v) in pairs {
            match entries.last_mut() {
                Some((j, w)) if *j == i => *w += &v,
                _ => entries.push((i, v)),
            }
        }
        entries.retain(|(_, v)| !v.is_zero());
        SparseVec { entries }
    }

    pub fn from_map(map: HashMap<usize, Scalar>) -> Self {
        Self::from_pairs(map.into_iter().collect())
    }

    pub fn from_dense(values: &[Scalar]) -> Self {
        SparseVec {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize, field: Field) -> Vec<Scalar> {
        let mut out = vec![field.zero(); len];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, Scalar)> {
        self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.entries.iter().map(|(i, v)| (*i, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn leading(&self) -> Option<(usize, &Scalar)> {
        self.entries.first().map(|(i, v)| (*i, v))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn get(&self, index: usize) -> Option<&Scalar> {
        self.entries
            .binary_search_by_key(&index, |(i, _)| *i)
            .ok()
            .map(|k| &self.entries[k].1)
    }

    pub fn scale(&mut self, a: &Scalar) {
        if a.is_zero() {
            self.entries.clear();
            return;
        }
        for (_, v) in &mut self.entries {
            *v = &*v * a;
        }
    }

    pub fn scaled(&self, a: &Scalar) -> SparseVec {
        let mut out = self.clone();
        out.scale(a);
        out
    }

    /// `self += a * other` by a sorted merge.
    pub fn axpy(&mut self, a: &Scalar, other: &SparseVec) {
        if a.is_zero() || other.is_zero() {
            return;
        }
        let mut merged = Vec::with_capacity(self.entries.len() + other.entries.len());
        let mut left = std::mem::take(&mut self.entries).into_iter().peekable();
        let mut right = other.entries.iter().peekable();
        loop {
            match (left.peek(), right.peek()) {
                (Some((i, _)), Some((j, _))) if i < j => merged.push(left.next().unwrap()),
                (Some((i, _)), Some((j, _))) if i > j => {
                    let (j, w) = right.next().unwrap();
                    merged.push((*j, a * w));
                }
                (Some(_), Some(_)) => {
                    let (i, mut v) = left.next().unwrap();
                    let (_, w) = right.next().unwrap();
                    v.add_mul(a, w);
                    if !v.is_zero() {
                        merged.push((i, v));
                    }
                }
                (Some(_), None) => merged.push(left.next().unwrap()),
                (None, Some(_)) => {
                    let (j, w) = right.next().unwrap();
                    merged.push((*j, a * w));
                }
                (None, None) => break,
            }
        }
        self.entries = merged;
    }

    pub fn add(&self, other: &SparseVec, field: Field) -> SparseVec {
        let mut out = self.clone();
        out.axpy(&field.one(), other);
        out
    }

    pub fn sub(&self, other: &SparseVec, field: Field) -> SparseVec {
        let mut out = self.clone();
        out.axpy(&-field.one(), other);
        out
    }

    /// Re-indexes every entry; `f` must be injective on the support.
    pub fn map_indices(&self, f: impl Fn(usize) -> usize) -> SparseVec {
        SparseVec::from_pairs(self.entries.iter().map(|(i, v)| (f(*i), v.clone())).collect())
    }

    pub fn dot(&self, other: &SparseVec, field: Field) -> Scalar {
        let mut acc = field.zero();
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() && b < other.entries.len() {
            let (i, x) = &self.entries[a];
            let (j, y) = &other.entries[b];
            match i.cmp(j) {
                std::cmp::Ordering::Less => a += 1,
                std::cmp::Ordering::Greater => b += 1,
                std::cmp::Ordering::Equal => {
                    acc.add_mul(x, y);
                    a += 1;
                    b += 1;
                }
            }
        }
        acc
    }

    /// Kronecker product `self ⊗ other` with `other` living in dimension
    /// `right_dim`.
    pub fn tensor(&self, other: &SparseVec, right_dim: usize) -> SparseVec {
        let mut entries = Vec::with_capacity(self.nnz() * other.nnz());
        for (i, x) in &self.entries {
            for (j, y) in &other.entries {
                entries.push((i * right_dim + j, x * y));
            }
        }
        SparseVec { entries }
    }
}

/// Incremental row echelon form over a fixed ambient dimension.
///
/// Rows are stored with leading coefficient 1 but are only reduced below
/// their own pivot ("semi-echelon"); [`EchelonBuilder::reduce`] yields the
/// remainder of a vector modulo the span.
#[derive(Clone, Debug)]
pub struct EchelonBuilder {
    field: Field,
    ambient: usize,
    pivot_of_col: HashMap<usize, usize>,
    rows: Vec<SparseVec>,
}

impl EchelonBuilder {
    pub fn new(field: Field, ambient: usize) -> Self {
        EchelonBuilder {
            field,
            ambient,
            pivot_of_col: HashMap::new(),
            rows: Vec::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<SparseVec> {
        self.rows
    }

    /// Eliminates pivots from `v` until its leading column is free or it
    /// vanishes. The tail is left unreduced.
    fn top_reduce(&self, mut v: SparseVec) -> SparseVec {
        while let Some((lead, coef)) = v.leading() {
            match self.pivot_of_col.get(&lead) {
                Some(&r) => {
                    let c = -coef;
                    v.axpy(&c, &self.rows[r]);
                }
                None => break,
            }
        }
        v
    }

    /// Full remainder of `v` modulo the current span; zero iff `v` lies in it.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut rest = v.clone();
        let mut done: Vec<(usize, Scalar)> = Vec::new();
        loop {
            rest = self.top_reduce(rest);
            let Some((lead, coef)) = rest.leading() else {
                break;
            };
            let coef = coef.clone();
            done.push((lead, coef.clone()));
            rest.axpy(&-coef, &SparseVec::unit(lead, self.field));
        }
        SparseVec::from_pairs(done)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span; returns `true` iff the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let v = self.top_reduce(v);
        let Some((lead, coef)) = v.leading() else {
            return false;
        };
        let inv = coef.inv().expect("nonzero leading coefficient");
        let v = v.scaled(&inv);
        self.pivot_of_col.insert(lead, self.rows.len());
        self.rows.push(v);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Scalar {
        Field::Rationals.from_i64(v)
    }

    #[test]
    fn axpy_merges_and_cancels() {
        let mut a = SparseVec::from_pairs(vec![(0, q(1)), (2, q(3))]);
        let b = SparseVec::from_pairs(vec![(1, q(5)), (2, q(1))]);
        a.axpy(&q(-3), &b);
        assert_eq!(a, SparseVec::from_pairs(vec![(0, q(1)), (1, q(-15))]));
    }

    #[test]
    fn from_pairs_merges_duplicates() {
        let v = SparseVec::from_pairs(vec![(3, q(1)), (1, q(2)), (3, q(-1))]);
        assert_eq!(v.entries(), &[(1, q(2))]);
    }

    #[test]
    fn echelon_membership() {
        let f = Field::Rationals;
        let mut e = EchelonBuilder::new(f, 3);
        assert!(e.insert(SparseVec::from_pairs(vec![(0, q(1)), (1, q(1))])));
        assert!(e.insert(SparseVec::from_pairs(vec![(1, q(1)), (2, q(1))])));
        assert!(!e.insert(SparseVec::from_pairs(vec![(0, q(1)), (2, q(-1))])));
        assert!(e.contains(&SparseVec::from_pairs(vec![(0, q(2)), (1, q(3)), (2, q(1))])));
        assert!(!e.contains(&SparseVec::unit(2, f)));
        assert_eq!(e.rank(), 2);
    }
}
