use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::linalg::{Field, Scalar, SparseVec};

/// A monomial `x_{i1} ⊗ … ⊗ x_{in}`; letters are 0-based basis indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letter(i: usize) -> Word {
        Word(vec![i as u8])
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn split_at(&self, k: usize) -> (Word, Word) {
        (Word(self.0[..k].to_vec()), Word(self.0[k..].to_vec()))
    }

    pub fn weight(&self, weights: &[usize]) -> usize {
        self.0.iter().map(|&l| weights[l as usize]).sum()
    }

    /// Renders with basis labels, `1` for the empty word.
    pub fn render(&self, labels: &[String]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        self.0
            .iter()
            .map(|&l| labels[l as usize].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Lexicographic rank of a word among all words of its length.
pub fn lex_rank(word: &Word, alphabet: usize) -> usize {
    word.0.iter().fold(0, |acc, &l| acc * alphabet + l as usize)
}

/// Inverse of [`lex_rank`].
pub fn unrank(mut rank: usize, alphabet: usize, degree: usize) -> Word {
    let mut letters = vec![0u8; degree];
    for slot in letters.iter_mut().rev() {
        *slot = (rank % alphabet) as u8;
        rank /= alphabet;
    }
    Word(letters)
}

/// An indexed set of words of one length, in lexicographic order.
///
/// `full` holds every word over the alphabet, so the index of a word is its
/// lexicographic rank and `V^p ⊗ V^q` indices factor as `i·d^q + j`.
/// `bounded` keeps only the words whose total letter weight stays within a
/// bound; it houses tensor powers of graded spaces truncated by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordBasis {
    alphabet: usize,
    degree: usize,
    words: Vec<Word>,
    index: Option<HashMap<Word, usize>>,
}

impl WordBasis {
    pub fn full(alphabet: usize, degree: usize) -> WordBasis {
        let count = alphabet.pow(degree as u32);
        WordBasis {
            alphabet,
            degree,
            words: (0..count).map(|r| unrank(r, alphabet, degree)).collect(),
            index: None,
        }
    }

    pub fn bounded(weights: &[usize], degree: usize, max_weight: usize) -> WordBasis {
        let alphabet = weights.len();
        let mut words = Vec::new();
        let mut stack = vec![(Vec::<u8>::new(), 0usize)];
        // Depth-first in reverse so that popping yields lexicographic order.
        while let Some((prefix, w)) = stack.pop() {
            if prefix.len() == degree {
                words.push(Word(prefix));
                continue;
            }
            for l in (0..alphabet).rev() {
                if w + weights[l] <= max_weight {
                    let mut next = prefix.clone();
                    next.push(l as u8);
                    stack.push((next, w + weights[l]));
                }
            }
        }
        let index = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        WordBasis {
            alphabet,
            degree,
            words,
            index: Some(index),
        }
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.index.is_none()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn word(&self, i: usize) -> &Word {
        &self.words[i]
    }

    pub fn index_of(&self, word: &Word) -> Option<usize> {
        if word.degree() != self.degree {
            return None;
        }
        match &self.index {
            None => Some(lex_rank(word, self.alphabet)),
            Some(map) => map.get(word).copied(),
        }
    }

    /// Converts word-keyed terms to a vector on this basis; `None` if a term
    /// falls outside the basis.
    pub fn vector(&self, terms: &LinComb) -> Option<SparseVec> {
        let mut pairs = Vec::with_capacity(terms.len());
        for (w, c) in terms {
            pairs.push((self.index_of(w)?, c.clone()));
        }
        Some(SparseVec::from_pairs(pairs))
    }

    pub fn terms(&self, v: &SparseVec) -> LinComb {
        v.iter().map(|(i, c)| (self.words[i].clone(), c.clone())).collect()
    }
}

/// Word-keyed linear combination used while applying braid operators.
pub type LinComb = HashMap<Word, Scalar>;

pub(crate) fn add_term(acc: &mut LinComb, word: Word, coef: Scalar) {
    if coef.is_zero() {
        return;
    }
    match acc.entry(word) {
        std::collections::hash_map::Entry::Occupied(mut e) => {
            *e.get_mut() += &coef;
            if e.get().is_zero() {
                e.remove();
            }
        }
        std::collections::hash_map::Entry::Vacant(e) => {
            e.insert(coef);
        }
    }
}

/// A homogeneous element of `V^⊗n`: nonzero coefficients keyed by words of
/// length `degree`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TensorElement {
    degree: usize,
    terms: BTreeMap<Word, Scalar>,
}

impl TensorElement {
    pub fn zero(degree: usize) -> Self {
        TensorElement {
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Fails if a word has the wrong length.
    pub fn new(degree: usize, terms: impl IntoIterator<Item = (Word, Scalar)>) -> Option<Self> {
        let mut out = TensorElement::zero(degree);
        for (w, c) in terms {
            if w.degree() != degree {
                return None;
            }
            out.add_term(w, c);
        }
        Some(out)
    }

    pub fn monomial(word: Word, field: Field) -> Self {
        TensorElement::new(word.degree(), [(word, field.one())]).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Word, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w.clone()).or_insert_with(|| c.field().zero());
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn to_vector(&self, basis: &WordBasis) -> Option<SparseVec> {
        let mut pairs = Vec::with_capacity(self.terms.len());
        for (w, c) in &self.terms {
            pairs.push((basis.index_of(w)?, c.clone()));
        }
        Some(SparseVec::from_pairs(pairs))
    }

    pub fn from_vector(basis: &WordBasis, v: &SparseVec) -> Self {
        TensorElement::new(
            basis.degree(),
            v.iter().map(|(i, c)| (basis.word(i).clone(), c.clone())),
        )
        .unwrap()
    }

    pub fn render(&self, labels: &[String]) -> String {
        render_terms(self.terms.iter(), labels)
    }
}

pub(crate) fn render_terms<'a>(terms: impl Iterator<Item = (&'a Word, &'a Scalar)>, labels: &[String]) -> String {
    let mut out = String::new();
    for (w, c) in terms {
        let coef = c.to_string();
        let (sign, magnitude) = match coef.strip_prefix('-') {
            Some(m) => ("-", m.to_string()),
            None => ("+", coef.clone()),
        };
        if out.is_empty() {
            if sign == "-" {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        let body = w.render(labels);
        if magnitude == "1" {
            out.push_str(&body);
        } else if w.degree() == 0 {
            out.push_str(&magnitude);
        } else {
            out.push_str(&format!("{magnitude} {body}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = (1..=255).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.render(&labels))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_round_trip() {
        for r in 0..27 {
            assert_eq!(lex_rank(&unrank(r, 3, 3), 3), r);
        }
        assert_eq!(unrank(5, 2, 3), Word(vec![1, 0, 1]));
    }

    #[test]
    fn bounded_basis_is_lexicographic() {
        let b = WordBasis::bounded(&[1, 2], 2, 3);
        let words: Vec<Vec<u8>> = b.words().iter().map(|w| w.0.clone()).collect();
        assert_eq!(words, vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
        assert_eq!(b.index_of(&Word(vec![1, 0])), Some(2));
        assert_eq!(b.index_of(&Word(vec![1, 1])), None);
    }

    #[test]
    fn rendering() {
        let q = Field::Rationals;
        let labels = vec!["x1".to_string(), "x2".to_string()];
        let e = TensorElement::new(2, [(Word(vec![1, 0]), q.one()), (Word(vec![0, 1]), q.from_i64(-2))]).unwrap();
        assert_eq!(e.render(&labels), "-2 x1 x2 + x2 x1");
    }
}
