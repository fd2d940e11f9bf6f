use itertools::Itertools;

/// A permutation of `0..n` in one-line notation: position `p` is sent to
/// `images[p]`. Acting on tensors it moves the factor in position `p` to
/// position `images[p]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// Fails unless `images` is a bijection of `0..n`.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Permutation { images })
    }

    /// The simple transposition `s_i` (1-based) of `n` letters.
    pub fn simple(i: usize, n: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i - 1, i);
        Permutation { images }
    }

    /// `s_{i1} s_{i2} … s_{ik}` for 1-based generator indices.
    pub fn from_reduced_word(n: usize, word: &[usize]) -> Self {
        word.iter().fold(Permutation::identity(n), |acc, &i| {
            acc.compose(&Permutation::simple(i, n))
        })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, p: usize) -> usize {
        self.images[p]
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Permutation) -> Permutation {
        Permutation {
            images: inner.images.iter().map(|&p| self.images[p]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.len()];
        for (p, &q) in self.images.iter().enumerate() {
            images[q] = p;
        }
        Permutation { images }
    }

    /// Coxeter length, the number of inversions.
    pub fn length(&self) -> usize {
        self.inversions().count()
    }

    /// Pairs `p < r` with `w(p) > w(r)`.
    pub fn inversions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.len();
        (0..n)
            .flat_map(move |p| (p + 1..n).map(move |r| (p, r)))
            .filter(|&(p, r)| self.images[p] > self.images[r])
    }

    /// Whether `ℓ(s_i w) < ℓ(w)` for the 1-based generator `i`.
    fn has_left_descent(&self, inverse: &Permutation, i: usize) -> bool {
        inverse.images[i - 1] > inverse.images[i]
    }

    /// The lexicographically smallest reduced word (1-based generators) with
    /// `w = s_{i1} … s_{ik}`.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.length());
        let mut w = self.clone();
        loop {
            let inv = w.inverse();
            match (1..w.len()).find(|&i| w.has_left_descent(&inv, i)) {
                Some(i) => {
                    word.push(i);
                    w = Permutation::simple(i, w.len()).compose(&w);
                }
                None => return word,
            }
        }
    }

    /// Every reduced word of `w`, in lexicographic order.
    pub fn reduced_words(&self) -> Vec<Vec<usize>> {
        let inv = self.inverse();
        let descents: Vec<usize> = (1..self.len()).filter(|&i| self.has_left_descent(&inv, i)).collect();
        if descents.is_empty() {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for i in descents {
            let rest = Permutation::simple(i, self.len()).compose(self);
            for mut tail in rest.reduced_words() {
                tail.insert(0, i);
                out.push(tail);
            }
        }
        out
    }

    /// The block crossing moving the first `n` strands past the last `m`.
    pub fn block_crossing(n: usize, m: usize) -> Self {
        let images = (0..n).map(|p| p + m).chain(0..m).collect();
        Permutation { images }
    }

    /// Permutations sending the factors in positions outside `right` to the
    /// first `n − |right|` slots and those in `right` to the last slots,
    /// preserving order within each group; one for every `q`-subset `right`.
    pub fn unshuffles(p: usize, q: usize) -> Vec<Permutation> {
        let n = p + q;
        (0..n)
            .combinations(q)
            .map(|right| {
                let mut images = vec![0; n];
                let (mut l, mut r) = (0, p);
                for (pos, slot) in images.iter_mut().enumerate() {
                    if right.contains(&pos) {
                        *slot = r;
                        r += 1;
                    } else {
                        *slot = l;
                        l += 1;
                    }
                }
                Permutation { images }
            })
            .collect()
    }

    /// All of `S_n` in lexicographic order of one-line notation.
    pub fn all(n: usize) -> Vec<Permutation> {
        (0..n).permutations(n).map(|images| Permutation { images }).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_word_round_trip() {
        for w in Permutation::all(5) {
            let word = w.reduced_word();
            assert_eq!(word.len(), w.length());
            assert_eq!(Permutation::from_reduced_word(5, &word), w);
            let all = w.reduced_words();
            assert_eq!(all[0], word);
            assert!(all.iter().all(|r| Permutation::from_reduced_word(5, r) == w));
        }
    }

    #[test]
    fn longest_element_of_s3() {
        let w0 = Permutation::from_images(vec![2, 1, 0]).unwrap();
        assert_eq!(w0.reduced_words(), vec![vec![1, 2, 1], vec![2, 1, 2]]);
    }

    #[test]
    fn block_crossing_and_unshuffles() {
        let b = Permutation::block_crossing(2, 1);
        assert_eq!(b.images(), &[1, 2, 0]);
        assert_eq!(b.reduced_word(), vec![1, 2]);
        let u = Permutation::unshuffles(1, 1);
        assert_eq!(u.len(), 2);
        assert!(u.contains(&Permutation::identity(2)));
        assert_eq!(Permutation::unshuffles(3, 2).len(), 10);
        assert_eq!(Permutation::unshuffles(2, 0), vec![Permutation::identity(2)]);
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(vec![0, 0]).is_none());
        assert!(Permutation::from_images(vec![0, 2]).is_none());
    }
}
