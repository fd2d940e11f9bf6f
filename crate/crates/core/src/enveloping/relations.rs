use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::braided::{render_terms, BraidedSpace, LinComb, TensorElement, Word};
use crate::linalg::{solve_in_span, Field, Scalar, SparseVec, Subspace};
use crate::tower::{combinatorial_rank, free_presentation, primitives_of_degree, RankOutcome};

use super::tower::{tower_envelope, BracketRule};
use super::{EnvError, DEFAULT_HEADROOM};

/// One generator `lead − tail` of a defining ideal: `lead` is the nonzero
/// top-degree part and `tail` lives in strictly lower degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    lead: TensorElement,
    tail: BTreeMap<Word, Scalar>,
}

impl Relation {
    pub fn new(lead: TensorElement, tail: impl IntoIterator<Item = (Word, Scalar)>) -> Result<Self, EnvError> {
        if lead.is_zero() {
            return Err(EnvError::Relation("leading part is zero".into()));
        }
        let mut map = BTreeMap::new();
        for (w, c) in tail {
            if w.degree() >= lead.degree() {
                return Err(EnvError::Relation(format!(
                    "tail word of degree {} is not below the top degree {}",
                    w.degree(),
                    lead.degree()
                )));
            }
            accumulate(&mut map, w, c);
        }
        Ok(Relation { lead, tail: map })
    }

    /// Splits an arbitrary nonzero element into top-degree part and tail.
    pub fn from_terms(terms: impl IntoIterator<Item = (Word, Scalar)>) -> Result<Self, EnvError> {
        let mut all = BTreeMap::new();
        for (w, c) in terms {
            accumulate(&mut all, w, c);
        }
        let top = all
            .keys()
            .map(Word::degree)
            .max()
            .ok_or_else(|| EnvError::Relation("relation is zero".into()))?;
        let (high, low): (Vec<_>, Vec<_>) = all.into_iter().partition(|(w, _)| w.degree() == top);
        let lead = TensorElement::new(top, high).expect("degrees match");
        Relation::new(lead, low.into_iter().map(|(w, c)| (w, -c)))
    }

    pub fn top(&self) -> usize {
        self.lead.degree()
    }

    pub fn lead(&self) -> &TensorElement {
        &self.lead
    }

    pub fn tail(&self) -> &BTreeMap<Word, Scalar> {
        &self.tail
    }

    pub fn is_homogeneous(&self) -> bool {
        self.tail.is_empty()
    }

    /// The ideal generator `lead − tail` as (word, coefficient) pairs.
    pub fn generator(&self) -> Vec<(Word, Scalar)> {
        self.lead
            .terms()
            .iter()
            .map(|(w, c)| (w.clone(), c.clone()))
            .chain(self.tail.iter().map(|(w, c)| (w.clone(), -c)))
            .collect()
    }

    pub fn render(&self, labels: &[String]) -> String {
        let mut terms: Vec<(Word, Scalar)> = self.generator();
        terms.sort_by(|(a, _), (b, _)| b.degree().cmp(&a.degree()).then(a.cmp(b)));
        render_terms(terms.iter().map(|(w, c)| (w, c)), labels)
    }
}

fn accumulate(map: &mut BTreeMap<Word, Scalar>, w: Word, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let entry = map.entry(w.clone()).or_insert_with(|| c.field().zero());
    *entry += &c;
    if entry.is_zero() {
        map.remove(&w);
    }
}

/// The defining relations of a filtered quotient of `T(V, c)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RelationSet {
    pub relations: Vec<Relation>,
    /// Set when the rank-one presentation is not certified to be the
    /// universal enveloping algebra.
    pub presentation_level_only: bool,
}

impl RelationSet {
    pub fn new(relations: Vec<Relation>) -> Self {
        RelationSet {
            relations,
            presentation_level_only: false,
        }
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn render(&self, labels: &[String]) -> Vec<String> {
        self.relations.iter().map(|r| r.render(labels)).collect()
    }
}

/// Structure constants `[x_i, x_j] = Σ_k c_ij^k x_k` of a bracket on `V`,
/// stored antisymmetrically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieBracket {
    field: Field,
    dim: usize,
    table: Vec<Vec<SparseVec>>,
}

impl LieBracket {
    /// `entries` gives `[x_i, x_j]` for some pairs (0-based); the rest
    /// follows by antisymmetry or is zero. Conflicting entries are an error.
    pub fn new(field: Field, dim: usize, entries: &[(usize, usize, SparseVec)]) -> Result<Self, EnvError> {
        let mut table = vec![vec![SparseVec::new(); dim]; dim];
        let mut seen = vec![vec![false; dim]; dim];
        for (i, j, v) in entries {
            let (i, j) = (*i, *j);
            if i >= dim || j >= dim || v.max_index().is_some_and(|k| k >= dim) {
                return Err(EnvError::Bracket(format!("bracket entry ({i}, {j}) out of range")));
            }
            if i == j {
                if !v.is_zero() {
                    return Err(EnvError::Bracket(format!("[x{0}, x{0}] must vanish", i + 1)));
                }
                continue;
            }
            let neg = v.scaled(&-field.one());
            for (a, b, val) in [(i, j, v.clone()), (j, i, neg)] {
                if seen[a][b] && table[a][b] != val {
                    return Err(EnvError::Bracket(format!(
                        "bracket is not antisymmetric at ({}, {})",
                        a + 1,
                        b + 1
                    )));
                }
                seen[a][b] = true;
                table[a][b] = val;
            }
        }
        let bracket = LieBracket { field, dim, table };
        bracket.check_jacobi()?;
        Ok(bracket)
    }

    /// The zero bracket.
    pub fn abelian(field: Field, dim: usize) -> Self {
        LieBracket {
            field,
            dim,
            table: vec![vec![SparseVec::new(); dim]; dim],
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `[x_i, x_j]`.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i][j]
    }

    pub fn bracket(&self, u: &SparseVec, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, a) in u.iter() {
            for (j, b) in v.iter() {
                out.axpy(&(a * b), &self.table[i][j]);
            }
        }
        out
    }

    fn check_jacobi(&self) -> Result<(), EnvError> {
        let e = |i: usize| SparseVec::unit(i, self.field);
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let mut sum = self.bracket(&e(i), &self.table[j][k]);
                    sum.axpy(&self.field.one(), &self.bracket(&e(j), &self.table[k][i]));
                    sum.axpy(&self.field.one(), &self.bracket(&e(k), &self.table[i][j]));
                    if !sum.is_zero() {
                        return Err(EnvError::Bracket(format!(
                            "Jacobi identity fails on (x{}, x{}, x{})",
                            i + 1,
                            j + 1,
                            k + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The bracket datum defining an enveloping algebra.
#[derive(Clone)]
pub enum BracketSpec {
    /// `b = 0` in degrees ≥ 2: the enveloping algebra is the Nichols algebra.
    Trivial,
    /// `β` on a basis of the homogeneous primitives `E(V, c)` of degrees
    /// `2..=N`, with values in `V` given as coordinate vectors.
    Rank1Map(Vec<(TensorElement, SparseVec)>),
    /// A Lie algebra on `V` with the flip braiding in characteristic 0.
    LieFlip(LieBracket),
    /// A restricted Lie algebra with the flip braiding in characteristic p;
    /// `pmap[i]` is `x_i^[p]`.
    RestrictedFlip { bracket: LieBracket, pmap: Vec<SparseVec> },
    /// Explicit defining relations.
    Relations(Vec<Relation>),
    /// A caller rule producing `b^[n]` at every tower stage.
    CustomTower(Arc<dyn BracketRule>),
}

impl fmt::Debug for BracketSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BracketSpec::Trivial => write!(f, "Trivial"),
            BracketSpec::Rank1Map(m) => f.debug_tuple("Rank1Map").field(m).finish(),
            BracketSpec::LieFlip(b) => f.debug_tuple("LieFlip").field(b).finish(),
            BracketSpec::RestrictedFlip { bracket, pmap } => f
                .debug_struct("RestrictedFlip")
                .field("bracket", bracket)
                .field("pmap", pmap)
                .finish(),
            BracketSpec::Relations(r) => f.debug_tuple("Relations").field(r).finish(),
            BracketSpec::CustomTower(_) => write!(f, "CustomTower(..)"),
        }
    }
}

impl BracketSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            BracketSpec::Trivial => "trivial",
            BracketSpec::Rank1Map(_) => "rank1_map",
            BracketSpec::LieFlip(_) => "lie_flip",
            BracketSpec::RestrictedFlip { .. } => "restricted_flip",
            BracketSpec::Relations(_) => "relations",
            BracketSpec::CustomTower(_) => "custom_tower",
        }
    }
}

/// The defining relations of the enveloping algebra of `(V, c, b)` up to
/// degree `truncation`.
pub fn relations_from_bracket(s: &BraidedSpace, b: &BracketSpec, truncation: usize) -> Result<RelationSet, EnvError> {
    let field = s.field();
    match b {
        BracketSpec::Trivial => trivial_relations(s, truncation),
        BracketSpec::Rank1Map(beta) => {
            let relations = rank_one_relations(s, beta, truncation)?;
            let mut set = RelationSet::new(relations);
            set.presentation_level_only = !rank_at_most_one(s, truncation)?;
            Ok(set)
        }
        BracketSpec::LieFlip(bracket) => {
            require_flip(s, bracket)?;
            if field.characteristic() != 0 {
                return Err(EnvError::Bracket("lie_flip requires characteristic 0".into()));
            }
            Ok(RelationSet::new(commutator_relations(s, bracket)?))
        }
        BracketSpec::RestrictedFlip { bracket, pmap } => {
            require_flip(s, bracket)?;
            let p = field.characteristic();
            if p == 0 {
                return Err(EnvError::Bracket("restricted_flip requires a prime field".into()));
            }
            check_restricted(bracket, pmap, p)?;
            let mut relations = commutator_relations(s, bracket)?;
            if p as usize <= truncation {
                for (i, value) in pmap.iter().enumerate() {
                    let power = Word(vec![i as u8; p as usize]);
                    let tail = value.iter().map(|(k, c)| (Word::letter(k), c.clone()));
                    relations.push(Relation::new(TensorElement::monomial(power, field), tail)?);
                }
            }
            Ok(RelationSet::new(relations))
        }
        BracketSpec::Relations(relations) => {
            for r in relations {
                check_relation(s, r)?;
            }
            Ok(RelationSet::new(relations.clone()))
        }
        BracketSpec::CustomTower(rule) => {
            let run = tower_envelope(s, rule.as_ref(), truncation, DEFAULT_HEADROOM, truncation)?;
            Ok(run.presentation.relations().clone())
        }
    }
}

pub(crate) fn check_relation(s: &BraidedSpace, r: &Relation) -> Result<(), EnvError> {
    let d = s.dim();
    for (w, c) in r.generator() {
        if w.letters().iter().any(|&l| l as usize >= d) {
            return Err(EnvError::Relation(format!("letter out of range in {w:?}")));
        }
        if c.field() != s.field() {
            return Err(EnvError::Relation("relation coefficients lie in another field".into()));
        }
        if w.degree() == 0 {
            return Err(EnvError::Relation(
                "relations must have zero constant term (the counit has to vanish on them)".into(),
            ));
        }
    }
    Ok(())
}

/// Minimal generators of the stabilized symmetric-algebra tower.
fn trivial_relations(s: &BraidedSpace, truncation: usize) -> Result<RelationSet, EnvError> {
    let (outcome, trace) = combinatorial_rank(s, truncation, truncation)?;
    if let RankOutcome::Exceeded { max_steps } = outcome {
        return Err(EnvError::Precondition(format!(
            "the symmetric-algebra tower did not stabilize within {max_steps} steps"
        )));
    }
    let stable = trace.stages.last().expect("tower has a stage");
    let mut relations = Vec::new();
    for (k, gens) in stable.minimal_generators().into_iter().enumerate() {
        let basis = s.basis(k);
        for g in gens {
            relations.push(Relation::new(TensorElement::from_vector(&basis, &g), [])?);
        }
    }
    Ok(RelationSet::new(relations))
}

fn rank_at_most_one(s: &BraidedSpace, truncation: usize) -> Result<bool, EnvError> {
    let (outcome, _) = combinatorial_rank(s, truncation, 1)?;
    Ok(matches!(outcome, RankOutcome::Certified { rank, .. } if rank <= 1))
}

fn require_flip(s: &BraidedSpace, bracket: &LieBracket) -> Result<(), EnvError> {
    let flip = BraidedSpace::flip(s.field(), s.dim())?;
    if s.braiding() != flip.braiding() {
        return Err(EnvError::Bracket("Lie brackets require the flip braiding".into()));
    }
    if bracket.dim() != s.dim() || bracket.field() != s.field() {
        return Err(EnvError::Bracket(
            "bracket and space disagree on dimension or field".into(),
        ));
    }
    Ok(())
}

/// `x_i x_j − x_j x_i − [x_i, x_j]` for `i < j`.
fn commutator_relations(s: &BraidedSpace, bracket: &LieBracket) -> Result<Vec<Relation>, EnvError> {
    let field = s.field();
    let d = s.dim();
    let mut out = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let lead = TensorElement::new(
                2,
                [
                    (Word(vec![i as u8, j as u8]), field.one()),
                    (Word(vec![j as u8, i as u8]), -field.one()),
                ],
            )
            .unwrap();
            let tail = bracket
                .basis_bracket(i, j)
                .iter()
                .map(|(k, c)| (Word::letter(k), c.clone()))
                .collect::<Vec<_>>();
            out.push(Relation::new(lead, tail)?);
        }
    }
    Ok(out)
}

/// `ad(x_i^[p]) = (ad x_i)^p` on basis vectors.
fn check_restricted(bracket: &LieBracket, pmap: &[SparseVec], p: u64) -> Result<(), EnvError> {
    let d = bracket.dim();
    if pmap.len() != d || pmap.iter().any(|v| v.max_index().is_some_and(|k| k >= d)) {
        return Err(EnvError::Bracket("p-map needs one value in V per basis vector".into()));
    }
    for (i, xi_p) in pmap.iter().enumerate() {
        let xi = SparseVec::unit(i, bracket.field());
        for j in 0..d {
            let mut iterated = SparseVec::unit(j, bracket.field());
            for _ in 0..p {
                iterated = bracket.bracket(&xi, &iterated);
            }
            let direct = bracket.bracket(xi_p, &SparseVec::unit(j, bracket.field()));
            if direct != iterated {
                return Err(EnvError::Bracket(format!(
                    "restricted axiom ad(x{0}^[p]) = (ad x{0})^p fails on x{1}",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

/// `e − β(e)` after checking that the given elements form a basis of
/// `E(V, c)` degreewise and that `β` satisfies both compatibility
/// equations with the braiding.
fn rank_one_relations(
    s: &BraidedSpace,
    beta: &[(TensorElement, SparseVec)],
    truncation: usize,
) -> Result<Vec<Relation>, EnvError> {
    let d = s.dim();
    let map = RankOneMap::new(s, beta, truncation)?;
    map.check_compatibility()?;
    let mut out = Vec::new();
    for (e, v) in beta {
        if v.max_index().is_some_and(|k| k >= d) {
            return Err(EnvError::Bracket("β value outside V".into()));
        }
        let tail = v.iter().map(|(k, c)| (Word::letter(k), c.clone()));
        out.push(Relation::new(e.clone(), tail)?);
    }
    Ok(out)
}

/// `β` on `E(V, c)`, evaluated degreewise by solving in the given basis.
#[derive(Clone, Debug)]
pub(crate) struct RankOneMap {
    space: BraidedSpace,
    /// Per degree: basis vectors of `E_k` (lexicographic coordinates) and
    /// their values.
    by_degree: HashMap<usize, (Vec<SparseVec>, Vec<SparseVec>)>,
}

impl RankOneMap {
    pub(crate) fn new(
        s: &BraidedSpace,
        beta: &[(TensorElement, SparseVec)],
        truncation: usize,
    ) -> Result<Self, EnvError> {
        let free = free_presentation(s, truncation)?;
        let mut by_degree: HashMap<usize, (Vec<SparseVec>, Vec<SparseVec>)> = HashMap::new();
        for (e, v) in beta {
            let k = e.degree();
            if k < 2 || k > truncation {
                return Err(EnvError::Bracket(format!(
                    "β is given on degree {k}, outside 2..={truncation}"
                )));
            }
            let vec = e
                .to_vector(&s.basis(k))
                .ok_or_else(|| EnvError::Bracket("β element uses letters outside V".into()))?;
            let entry = by_degree.entry(k).or_default();
            entry.0.push(vec);
            entry.1.push(v.clone());
        }
        for k in 2..=truncation {
            let e_k = primitives_of_degree(&free, k)?;
            let given = by_degree.get(&k).map(|(v, _)| v.clone()).unwrap_or_default();
            let span = Subspace::span(s.field(), s.dim().pow(k as u32), given.iter().cloned());
            if span != e_k || given.len() != e_k.dim() {
                return Err(EnvError::Bracket(format!(
                    "β must be given on a basis of the degree-{k} primitives (dimension {})",
                    e_k.dim()
                )));
            }
        }
        Ok(RankOneMap {
            space: s.clone(),
            by_degree,
        })
    }

    /// `β` on a homogeneous element of degree `k ≥ 2`; `None` outside `E_k`.
    pub(crate) fn apply(&self, k: usize, v: &SparseVec) -> Option<SparseVec> {
        if v.is_zero() {
            return Some(SparseVec::new());
        }
        let (basis, values) = self.by_degree.get(&k)?;
        let coefs = solve_in_span(self.space.field(), basis, v, self.space.dim().pow(k as u32))?;
        let mut out = SparseVec::new();
        for (c, val) in coefs.iter().zip(values) {
            out.axpy(c, val);
        }
        Some(out)
    }

    /// `c(β⊗id) = (id⊗β)c_T` on `E⊗V` and `c(id⊗β) = (β⊗id)c_T` on `V⊗E`.
    fn check_compatibility(&self) -> Result<(), EnvError> {
        let s = &self.space;
        let d = s.dim();
        for (&k, (basis, values)) in &self.by_degree {
            let words = s.basis(k);
            for (e, value) in basis.iter().zip(values) {
                for a in 0..d {
                    for right in [true, false] {
                        // Left side: the braiding applied to β(e) and x_a.
                        let mut lhs = LinComb::new();
                        for (j, c) in value.iter() {
                            let w = if right {
                                Word(vec![j as u8, a as u8])
                            } else {
                                Word(vec![a as u8, j as u8])
                            };
                            for (u, x) in s.ct_word(&w, 1) {
                                crate::braided::add_term(&mut lhs, u, c * &x);
                            }
                        }
                        // Right side: c_T first, then β on the long factor.
                        let mut crossed = LinComb::new();
                        for (i, c) in e.iter() {
                            let w = words.word(i);
                            let (word, split) = if right {
                                (w.concat(&Word::letter(a)), k)
                            } else {
                                (Word::letter(a).concat(w), 1)
                            };
                            for (u, x) in s.ct_word(&word, split) {
                                crate::braided::add_term(&mut crossed, u, c * &x);
                            }
                        }
                        let mut parts: HashMap<u8, SparseVec> = HashMap::new();
                        for (u, c) in crossed {
                            let (letter, long) = if right {
                                let (h, t) = u.split_at(1);
                                (h.0[0], t)
                            } else {
                                let (h, t) = u.split_at(k);
                                (t.0[0], h)
                            };
                            parts
                                .entry(letter)
                                .or_default()
                                .axpy(&c, &SparseVec::unit(words.index_of(&long).unwrap(), s.field()));
                        }
                        let mut rhs = LinComb::new();
                        for (letter, part) in parts {
                            let image = self.apply(k, &part).ok_or_else(|| {
                                EnvError::Bracket(format!("the braiding does not preserve the degree-{k} primitives"))
                            })?;
                            for (j, c) in image.iter() {
                                let w = if right {
                                    Word(vec![letter, j as u8])
                                } else {
                                    Word(vec![j as u8, letter])
                                };
                                crate::braided::add_term(&mut rhs, w, c.clone());
                            }
                        }
                        if lhs != rhs {
                            let side = if right {
                                "c(β⊗id) = (id⊗β)c"
                            } else {
                                "c(id⊗β) = (β⊗id)c"
                            };
                            let elem = TensorElement::from_vector(&words, e).render(s.labels());
                            return Err(EnvError::Bracket(format!(
                                "bracket compatibility {side} fails on ({elem}, {})",
                                s.labels()[a]
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
