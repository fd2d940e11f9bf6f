use std::collections::HashMap;
use std::sync::OnceLock;

use crate::braided::{BraidedSpace, GradedOperator, LinComb, Word, WordBasis, DEFAULT_FACTORIAL_BUDGET};
use crate::linalg::{EchelonBuilder, Field, Matrix, Scalar, SparseVec, Subspace};

use super::filtered::FilteredPresentation;
use super::EnvError;

/// A truncated filtered quotient `U_(N)` with its monomial basis, products,
/// reduced coproduct and a chosen generating space `G` (by default `π(V)`).
///
/// `U` coordinates index the normal words ordered by degree and then
/// lexicographically, so the unit is coordinate 0 and every `U_(n)` is a
/// prefix. Tensor squares use the pair index `i · dim U + j`.
#[derive(Debug)]
pub struct Envelope {
    pres: FilteredPresentation,
    normal: Vec<Word>,
    degrees: Vec<usize>,
    /// Normal form of every word of `T_(N)`, by filtered index.
    nf: Vec<SparseVec>,
    /// `Δ̄` of every normal word.
    dbar: Vec<SparseVec>,
    generators: Generators,
    injective: bool,
    products: OnceLock<Result<Vec<ProductTable>, EnvError>>,
    symmetrizers: OnceLock<Result<Vec<GradedOperator>, EnvError>>,
}

/// Generator words of one degree with their images in `U`.
type ProductTable = (WordBasis, Vec<SparseVec>);

/// A generating space of `U` with the braiding induced on it; letter `a`
/// of [`Generators::space`] stands for `elements[a]`.
#[derive(Clone, Debug)]
pub struct Generators {
    pub elements: Vec<SparseVec>,
    pub space: BraidedSpace,
}

/// A counterexample found by a check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub check: String,
    pub degree: usize,
    pub element: String,
}

/// Verdict of a check together with its first counterexample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl CheckResult {
    pub(crate) fn ok() -> Self {
        CheckResult {
            holds: true,
            witness: None,
        }
    }

    pub(crate) fn fail(check: &str, degree: usize, element: String) -> Self {
        CheckResult {
            holds: false,
            witness: Some(Witness {
                check: check.into(),
                degree,
                element,
            }),
        }
    }
}

impl Envelope {
    /// Uses `G = π(V)` with the braiding of `V`.
    pub fn new(pres: FilteredPresentation) -> Result<Self, EnvError> {
        let mut env = Envelope::bare(pres)?;
        let field = env.field();
        let d = env.pres.space().dim();
        let elements: Vec<SparseVec> = (0..d).map(|a| env.nf_word(&Word::letter(a))).collect();
        env.injective = Subspace::span(field, env.dim(), elements.iter().cloned()).dim() == d;
        env.generators = Generators {
            elements,
            space: env.pres.space().clone(),
        };
        Ok(env)
    }

    /// Uses `G = P(U)` with its induced braiding, weighted by filtration
    /// degree.
    pub fn with_primitive_generators(pres: FilteredPresentation) -> Result<Self, EnvError> {
        let mut env = Envelope::new(pres)?;
        let basis = env.primitive_basis();
        env.generators = env.induced_generators(basis)?;
        Ok(env)
    }

    fn bare(pres: FilteredPresentation) -> Result<Self, EnvError> {
        if !pres.stable() {
            return Err(EnvError::NotStable(pres.headroom()));
        }
        let field = pres.space().field();
        let words = pres.words().clone();
        let normal = pres.normal_words();
        let index_of: HashMap<usize, usize> = normal.iter().enumerate().map(|(u, w)| (words.index(w), u)).collect();
        let to_u = |v: SparseVec| {
            SparseVec::from_pairs(v.into_entries().into_iter().map(|(i, c)| (index_of[&i], c)).collect())
        };
        let nf: Vec<SparseVec> = (0..words.len())
            .map(|i| to_u(pres.ideal().reduce(&SparseVec::unit(i, field))))
            .collect();
        let degrees = normal.iter().map(Word::degree).collect();
        let mut env = Envelope {
            generators: Generators {
                elements: Vec::new(),
                space: pres.space().clone(),
            },
            pres,
            normal,
            degrees,
            nf,
            dbar: Vec::new(),
            injective: true,
            products: OnceLock::new(),
            symmetrizers: OnceLock::new(),
        };
        let dbar_words: Vec<SparseVec> = (0..words.len()).map(|i| env.dbar_of_word(&words.word(i))).collect();
        // J must be a coideal: Δ̄ of every element of F_N vanishes in U ⊗ U.
        for row in env.pres.ideal().basis() {
            let mut acc = SparseVec::new();
            for (i, c) in row.iter() {
                acc.axpy(c, &dbar_words[i]);
            }
            if !acc.is_zero() {
                let element = crate::braided::render_terms(
                    words
                        .terms(row)
                        .iter()
                        .collect::<std::collections::BTreeMap<_, _>>()
                        .into_iter(),
                    env.pres.space().labels(),
                );
                return Err(EnvError::NotCoideal(element));
            }
        }
        env.dbar = env.normal.iter().map(|w| dbar_words[words.index(w)].clone()).collect();
        Ok(env)
    }

    pub fn presentation(&self) -> &FilteredPresentation {
        &self.pres
    }

    pub fn field(&self) -> Field {
        self.pres.space().field()
    }

    /// `dim U_(N)`.
    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn truncation(&self) -> usize {
        self.pres.truncation()
    }

    pub fn normal_words(&self) -> &[Word] {
        &self.normal
    }

    /// Filtration degree of each `U` coordinate.
    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn generators(&self) -> &Generators {
        &self.generators
    }

    /// Whether `V → U` is injective.
    pub fn is_injective_on_v(&self) -> bool {
        self.injective
    }

    /// Normal form of a word of degree at most `N`.
    pub fn nf_word(&self, w: &Word) -> SparseVec {
        self.nf[self.pres.words().index(w)].clone()
    }

    /// Normal form of an element of `T_(N)`; `None` above the truncation.
    pub fn nf(&self, terms: &LinComb) -> Option<SparseVec> {
        let mut out = SparseVec::new();
        for (w, c) in terms {
            if w.degree() > self.truncation() {
                return None;
            }
            out.axpy(c, &self.nf_word(w));
        }
        Some(out)
    }

    /// A representative in `T` supported on normal words.
    pub fn lift(&self, u: &SparseVec) -> LinComb {
        u.iter().map(|(i, c)| (self.normal[i].clone(), c.clone())).collect()
    }

    /// `U_(n)` as a coordinate subspace.
    pub fn filtration_step(&self, n: usize) -> Subspace {
        let count = self.degrees.iter().filter(|&&k| k <= n).count();
        Subspace::coordinate(self.field(), self.dim(), 0..count)
    }

    pub fn render(&self, u: &SparseVec) -> String {
        let terms: std::collections::BTreeMap<Word, Scalar> = self.lift(u).into_iter().collect();
        crate::braided::render_terms(terms.iter(), self.pres.space().labels())
    }

    /// `uv`, or `None` when a product term leaves `U_(N)`.
    pub fn multiply(&self, u: &SparseVec, v: &SparseVec) -> Option<SparseVec> {
        let mut out = SparseVec::new();
        for (i, a) in u.iter() {
            for (j, b) in v.iter() {
                if self.degrees[i] + self.degrees[j] > self.truncation() {
                    return None;
                }
                out.axpy(&(a * b), &self.nf_word(&self.normal[i].concat(&self.normal[j])));
            }
        }
        Some(out)
    }

    /// `Σ_{p,q≥1} (NF ⊗ NF) Δ_{p,q}(w)` in pair coordinates.
    fn dbar_of_word(&self, w: &Word) -> SparseVec {
        let s = self.pres.space();
        let dim = self.dim();
        let mut out = SparseVec::new();
        for p in 1..w.degree() {
            for (u, c) in s.delta_word(w, p) {
                let (left, right) = u.split_at(p);
                let term = self.nf_word(&left).tensor(&self.nf_word(&right), dim);
                out.axpy(&c, &term);
            }
        }
        out
    }

    /// The reduced coproduct `Δ̄(u) = Δ(u) − u⊗1 − 1⊗u` for `u ∈ U⁺`.
    pub fn reduced_coproduct(&self, u: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, c) in u.iter() {
            out.axpy(c, &self.dbar[i]);
        }
        out
    }

    /// `c_U(u_i ⊗ u_j)` for normal words, in pair coordinates.
    pub fn braid_pair(&self, i: usize, j: usize) -> SparseVec {
        let s = self.pres.space();
        let (a, b) = (&self.normal[i], &self.normal[j]);
        let mut out = SparseVec::new();
        for (w, c) in s.ct_word(&a.concat(b), a.degree()) {
            let (left, right) = w.split_at(b.degree());
            out.axpy(&c, &self.nf_word(&left).tensor(&self.nf_word(&right), self.dim()));
        }
        out
    }

    /// `c_U(x ⊗ y)` in pair coordinates.
    pub fn braid(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                out.axpy(&(a * b), &self.braid_pair(i, j));
            }
        }
        out
    }

    /// `P(U) = ker Δ̄` on `U⁺`, as rows reduced at their highest coordinate
    /// and sorted by it (a basis adapted to the standard filtration).
    pub fn primitive_basis(&self) -> Vec<SparseVec> {
        let images: Vec<SparseVec> = (1..self.dim()).map(|i| self.dbar[i].clone()).collect();
        let kernel = crate::linalg::kernel_of_images(self.field(), &images, self.dim() * self.dim());
        let vectors: Vec<SparseVec> = kernel.basis().iter().map(|v| v.map_indices(|k| k + 1)).collect();
        top_echelon(self.field(), self.dim(), vectors)
    }

    /// The braiding of `U` restricted to `span(basis)^{⊗2}`, with weights
    /// from the filtration degree of each element's highest term.
    pub fn induced_generators(&self, basis: Vec<SparseVec>) -> Result<Generators, EnvError> {
        let field = self.field();
        let n = basis.len();
        let dim = self.dim();
        let tops: Vec<usize> = basis.iter().map(|v| v.max_index().expect("nonzero")).collect();
        let mut columns = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let image = self.braid(&basis[a], &basis[b]);
                let mut coords = Vec::new();
                let mut rebuilt = SparseVec::new();
                for k in 0..n {
                    for l in 0..n {
                        if let Some(c) = image.get(tops[k] * dim + tops[l]) {
                            coords.push((k * n + l, c.clone()));
                            rebuilt.axpy(c, &basis[k].tensor(&basis[l], dim));
                        }
                    }
                }
                if rebuilt != image {
                    return Err(EnvError::PrimitiveBraiding(format!(
                        "c({} ⊗ {}) leaves the span",
                        self.render(&basis[a]),
                        self.render(&basis[b])
                    )));
                }
                columns.push(SparseVec::from_pairs(coords));
            }
        }
        let matrix = Matrix::from_columns(field, n * n, &columns);
        let weights: Vec<usize> = tops.iter().map(|&t| self.degrees[t]).collect();
        let labels = self.generator_labels(&basis);
        let space = BraidedSpace::new(field, n, matrix)?
            .with_weights(weights)?
            .with_labels(labels)?;
        Ok(Generators { elements: basis, space })
    }

    /// Labels of letters: the word itself for monomials, `[…]` around
    /// longer monomials and `p_k` otherwise.
    fn generator_labels(&self, basis: &[SparseVec]) -> Vec<String> {
        let labels = self.pres.space().labels();
        basis
            .iter()
            .enumerate()
            .map(|(k, v)| match v.entries() {
                [(i, c)] if c.is_one() && self.degrees[*i] == 1 => self.normal[*i].render(labels),
                [(i, c)] if c.is_one() => format!("[{}]", self.normal[*i].render(labels).replace(' ', "")),
                _ => format!("p{}", k + 1),
            })
            .collect()
    }

    /// Products of generator words: per length `n ≤ N`, the weight-bounded
    /// word basis and the image of each word in `U`.
    pub fn generator_products(&self) -> Result<&[ProductTable], EnvError> {
        self.products
            .get_or_init(|| {
                let g = &self.generators;
                let n_max = self.truncation();
                let mut out: Vec<ProductTable> = Vec::with_capacity(n_max + 1);
                let mut memo: HashMap<Word, SparseVec> = HashMap::new();
                memo.insert(Word::empty(), SparseVec::unit(0, self.field()));
                for n in 0..=n_max {
                    let basis = g.space.bounded_basis(n, n_max);
                    let mut images = Vec::with_capacity(basis.len());
                    for w in basis.words() {
                        let image = match memo.get(w) {
                            Some(v) => v.clone(),
                            None => {
                                let (prefix, last) = w.split_at(n - 1);
                                let left = memo.get(&prefix).expect("prefix computed").clone();
                                let right = &g.elements[last.0[0] as usize];
                                let v = self.multiply(&left, right).ok_or_else(|| {
                                    EnvError::Inconsistent(format!(
                                        "a generator product of weight ≤ {n_max} leaves U_({n_max})"
                                    ))
                                })?;
                                memo.insert(w.clone(), v.clone());
                                v
                            }
                        };
                        images.push(image);
                    }
                    out.push((basis, images));
                }
                Ok(out)
            })
            .as_ref()
            .map(|v| v.as_slice())
            .map_err(Clone::clone)
    }

    /// `U^G_(n)`: the span of products of at most `n` generators.
    pub fn generated_filtration(&self) -> Result<Vec<Subspace>, EnvError> {
        let products = self.generator_products()?;
        let mut builder = EchelonBuilder::new(self.field(), self.dim());
        let mut out = Vec::with_capacity(products.len());
        for (_, images) in products {
            for v in images {
                builder.insert(v.clone());
            }
            out.push(Subspace::from_echelon(builder.clone()));
        }
        Ok(out)
    }

    /// Quantum symmetrizers of `(G, c_G)` on weight-bounded word bases.
    pub fn generator_symmetrizers(&self) -> Result<&[GradedOperator], EnvError> {
        self.symmetrizers
            .get_or_init(|| {
                let products = self.generator_products()?;
                products
                    .iter()
                    .map(|(basis, _)| Ok(self.generators.space.symmetrizer_on(basis, DEFAULT_FACTORIAL_BUDGET)?))
                    .collect()
            })
            .as_ref()
            .map(|v| v.as_slice())
            .map_err(Clone::clone)
    }

    /// `dim 𝓑^n(G, c_G)` within the weight bound, `n = 0..=N`.
    pub fn nichols_dims(&self) -> Result<Vec<usize>, EnvError> {
        Ok(self
            .generator_symmetrizers()?
            .iter()
            .map(GradedOperator::rank)
            .collect())
    }

    /// `dim U^G_(n) − dim U^G_(n−1)`.
    pub fn generated_graded_dims(&self) -> Result<Vec<usize>, EnvError> {
        let steps = self.generated_filtration()?;
        Ok((0..steps.len())
            .map(|n| steps[n].dim() - if n == 0 { 0 } else { steps[n - 1].dim() })
            .collect())
    }

    pub(crate) fn render_generator_word(&self, terms: &LinComb) -> String {
        let sorted: std::collections::BTreeMap<Word, Scalar> = terms.clone().into_iter().collect();
        crate::braided::render_terms(sorted.iter(), self.generators.space.labels())
    }
}

/// Echelon basis reduced at each row's highest coordinate, sorted by it.
pub(crate) fn top_echelon(field: Field, ambient: usize, vectors: Vec<SparseVec>) -> Vec<SparseVec> {
    let flip = |i: usize| ambient - 1 - i;
    let sub = Subspace::span(field, ambient, vectors.into_iter().map(|v| v.map_indices(flip)));
    let mut rows: Vec<SparseVec> = sub.basis().iter().map(|r| r.map_indices(flip)).collect();
    rows.sort_by_key(|r| r.max_index());
    rows
}
