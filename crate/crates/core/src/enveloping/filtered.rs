use crate::braided::{lex_rank, unrank, BraidedSpace, LinComb, Word};
use crate::linalg::{EchelonBuilder, SparseVec, Subspace};
use crate::tower::GradedPresentation;

use super::relations::{check_relation, Relation, RelationSet};
use super::EnvError;

/// All words of length at most `top`, indexed degree-descending and then
/// lexicographically descending. The leading entry of a row is therefore its
/// highest word, and `T_(n)` is a suffix of the index range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredWords {
    alphabet: usize,
    top: usize,
    /// `offsets[k]` is the first index of degree `k`.
    offsets: Vec<usize>,
    powers: Vec<usize>,
}

impl FilteredWords {
    pub fn new(alphabet: usize, top: usize) -> Self {
        let powers: Vec<usize> = (0..=top).map(|k| alphabet.pow(k as u32)).collect();
        let offsets = (0..=top).map(|k| powers[k + 1..].iter().sum()).collect();
        FilteredWords {
            alphabet,
            top,
            offsets,
            powers,
        }
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// `dim T_(top)`.
    pub fn len(&self) -> usize {
        self.offsets[0] + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// First index of the suffix holding `T_(n)`.
    pub fn start_of(&self, n: usize) -> usize {
        self.offsets[n]
    }

    /// `dim T_(n)` for `n ≤ top`.
    pub fn filtered_len(&self, n: usize) -> usize {
        self.len() - self.offsets[n]
    }

    pub fn index(&self, w: &Word) -> usize {
        let k = w.degree();
        self.offsets[k] + self.powers[k] - 1 - lex_rank(w, self.alphabet)
    }

    pub fn degree_of(&self, index: usize) -> usize {
        (0..=self.top)
            .find(|&k| index >= self.offsets[k] && index < self.offsets[k] + self.powers[k])
            .expect("index in range")
    }

    pub fn word(&self, index: usize) -> Word {
        let k = self.degree_of(index);
        unrank(self.powers[k] - 1 - (index - self.offsets[k]), self.alphabet, k)
    }

    /// Converts word-keyed terms of degree at most `top` to a vector.
    pub fn vector(&self, terms: &LinComb) -> Option<SparseVec> {
        let mut pairs = Vec::with_capacity(terms.len());
        for (w, c) in terms {
            if w.degree() > self.top {
                return None;
            }
            pairs.push((self.index(w), c.clone()));
        }
        Some(SparseVec::from_pairs(pairs))
    }

    pub fn terms(&self, v: &SparseVec) -> LinComb {
        v.iter().map(|(i, c)| (self.word(i), c.clone())).collect()
    }
}

/// A filtered quotient `U = T(V, c)/J` truncated at degree `N`, holding
/// `F_N = J ∩ T_(N)` as a canonical subspace of `T_(N)`.
#[derive(Clone, Debug)]
pub struct FilteredPresentation {
    space: BraidedSpace,
    truncation: usize,
    headroom: usize,
    relations: RelationSet,
    words: FilteredWords,
    ideal: Subspace,
    stable: bool,
}

impl PartialEq for FilteredPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.truncation == other.truncation && self.ideal == other.ideal
    }
}

impl Eq for FilteredPresentation {}

impl FilteredPresentation {
    /// The homogeneous presentation of a graded quotient, which needs no
    /// headroom: `F_N = ⊕_{k≤N} I_k`.
    pub fn from_graded(p: &GradedPresentation) -> Self {
        let s = p.space();
        let n = p.truncation();
        let words = FilteredWords::new(s.dim(), n);
        let mut relations = Vec::new();
        for (k, gens) in p.minimal_generators().into_iter().enumerate() {
            let basis = s.basis(k);
            for g in gens {
                let lead = crate::braided::TensorElement::from_vector(&basis, &g);
                relations.push(Relation::new(lead, []).expect("nonzero generator"));
            }
        }
        let rows = p.ideal().iter().enumerate().flat_map(|(k, sub)| {
            let words = &words;
            let basis = s.basis(k);
            sub.basis()
                .iter()
                .map(move |r| r.map_indices(|i| words.index(basis.word(i))))
                .collect::<Vec<_>>()
        });
        let ideal = Subspace::span(s.field(), words.len(), rows);
        FilteredPresentation {
            space: s.clone(),
            truncation: n,
            headroom: 0,
            relations: RelationSet::new(relations),
            words,
            ideal,
            stable: true,
        }
    }

    pub fn space(&self) -> &BraidedSpace {
        &self.space
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Headroom at which `F_N` was computed and certified.
    pub fn headroom(&self) -> usize {
        self.headroom
    }

    pub fn relations(&self) -> &RelationSet {
        &self.relations
    }

    pub fn words(&self) -> &FilteredWords {
        &self.words
    }

    /// Whether `F_N` agreed between headroom `H` and `H + 1`.
    pub fn stable(&self) -> bool {
        self.stable
    }

    /// `F_N` in the coordinates of [`FilteredPresentation::words`].
    pub fn ideal(&self) -> &Subspace {
        &self.ideal
    }

    /// `F_n = F_N ∩ T_(n)` in the coordinates of `FilteredWords::new(d, n)`.
    pub fn ideal_at(&self, n: usize) -> Subspace {
        let start = self.words.start_of(n);
        let rows = self
            .ideal
            .basis()
            .iter()
            .filter(|r| r.leading().unwrap().0 >= start)
            .map(|r| r.map_indices(|i| i - start));
        Subspace::span(self.space.field(), self.words.filtered_len(n), rows)
    }

    /// `dim U_(n)` for `n = 0..=N`.
    pub fn filtration_dims(&self) -> Vec<usize> {
        let pivots = self.ideal.pivots();
        (0..=self.truncation)
            .map(|n| {
                let start = self.words.start_of(n);
                self.words.filtered_len(n) - pivots.iter().filter(|&&p| p >= start).count()
            })
            .collect()
    }

    /// `dim 𝔊^n(U) = dim U_(n) − dim U_(n−1)`.
    pub fn graded_dims(&self) -> Vec<usize> {
        let dims = self.filtration_dims();
        (0..dims.len())
            .map(|n| if n == 0 { dims[0] } else { dims[n] - dims[n - 1] })
            .collect()
    }

    /// Words whose images form the monomial basis of `U_(N)`, ordered by
    /// degree and then lexicographically.
    pub fn normal_words(&self) -> Vec<Word> {
        self.ideal
            .free_columns()
            .into_iter()
            .rev()
            .map(|i| self.words.word(i))
            .collect()
    }

    /// Normal form of an element of `T_(N)`, supported on normal words.
    pub fn normal_form(&self, terms: &LinComb) -> Option<LinComb> {
        let v = self.words.vector(terms)?;
        Some(self.words.terms(&self.ideal.reduce(&v)))
    }

    /// Whether an element of `T_(N)` lies in `J`.
    pub fn contains(&self, terms: &LinComb) -> Option<bool> {
        Some(self.ideal.contains(&self.words.vector(terms)?))
    }
}

/// `J ∩ T_(N)` computed inside the closure of top degree `N + H`, with the
/// stability flag from a second pass at `N + H + 1`.
pub fn filtered_ideal(
    s: &BraidedSpace,
    rels: &RelationSet,
    truncation: usize,
    headroom: usize,
) -> Result<FilteredPresentation, EnvError> {
    check_relations(s, rels, truncation)?;
    let ideal = closure(s, rels, truncation, truncation + headroom);
    let next = closure(s, rels, truncation, truncation + headroom + 1);
    Ok(FilteredPresentation {
        space: s.clone(),
        truncation,
        headroom,
        relations: rels.clone(),
        words: FilteredWords::new(s.dim(), truncation),
        stable: ideal == next,
        ideal,
    })
}

/// Raises the headroom from `headroom` until `F_N` stabilizes; instability
/// at `max_headroom` is an error.
pub fn filtered_ideal_certified(
    s: &BraidedSpace,
    rels: &RelationSet,
    truncation: usize,
    headroom: usize,
    max_headroom: usize,
) -> Result<FilteredPresentation, EnvError> {
    check_relations(s, rels, truncation)?;
    let mut h = headroom;
    let mut current = closure(s, rels, truncation, truncation + h);
    loop {
        let next = closure(s, rels, truncation, truncation + h + 1);
        if next == current {
            return Ok(FilteredPresentation {
                space: s.clone(),
                truncation,
                headroom: h,
                relations: rels.clone(),
                words: FilteredWords::new(s.dim(), truncation),
                ideal: current,
                stable: true,
            });
        }
        if h >= max_headroom {
            return Err(EnvError::Unstable {
                headroom: h,
                next: h + 1,
            });
        }
        h += 1;
        current = next;
    }
}

fn check_relations(s: &BraidedSpace, rels: &RelationSet, truncation: usize) -> Result<(), EnvError> {
    for r in &rels.relations {
        check_relation(s, r)?;
        if r.top() > truncation {
            return Err(EnvError::Relation(format!(
                "relation of degree {} exceeds the truncation {truncation}",
                r.top()
            )));
        }
    }
    Ok(())
}

/// Eliminates every `a · r · b` of top degree at most `top` in increasing
/// top degree and keeps the rows living in `T_(truncation)`.
fn closure(s: &BraidedSpace, rels: &RelationSet, truncation: usize, top: usize) -> Subspace {
    let field = s.field();
    let d = s.dim();
    let big = FilteredWords::new(d, top);
    let mut builder = EchelonBuilder::new(field, big.len());
    let generators: Vec<(usize, Vec<(Word, crate::linalg::Scalar)>)> =
        rels.relations.iter().map(|r| (r.top(), r.generator())).collect();
    for total in 1..=top {
        for (k, gen) in generators.iter().filter(|(k, _)| *k <= total) {
            let m = total - k;
            for i in 0..=m {
                let left_count = d.pow(i as u32);
                let right_count = d.pow((m - i) as u32);
                for a in 0..left_count {
                    let left = unrank(a, d, i);
                    for b in 0..right_count {
                        let right = unrank(b, d, m - i);
                        let row = SparseVec::from_pairs(
                            gen.iter()
                                .map(|(w, c)| (big.index(&left.concat(w).concat(&right)), c.clone()))
                                .collect(),
                        );
                        builder.insert(row);
                    }
                }
            }
        }
    }
    let start = big.start_of(truncation);
    let mut kept = EchelonBuilder::new(field, big.filtered_len(truncation));
    for row in builder.into_rows() {
        if row.leading().unwrap().0 >= start {
            kept.insert(row.map_indices(|i| i - start));
        }
    }
    Subspace::from_echelon(kept)
}
