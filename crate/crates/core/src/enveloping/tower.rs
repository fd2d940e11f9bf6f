use std::collections::HashMap;

use crate::braided::{BraidedSpace, TensorElement, Word};
use crate::linalg::{kernel_of_images, solve_in_span, Field, SparseVec, Subspace};
use crate::tower::{combinatorial_rank, free_presentation, RankOutcome};

use super::analysis::Envelope;
use super::coradical::{coradical_filtration, cosymmetric_check};
use super::filtered::{filtered_ideal_certified, FilteredPresentation};
use super::relations::{BracketSpec, LieBracket, RankOneMap, Relation, RelationSet};
use super::{EnvError, DEFAULT_MAX_HEADROOM};

/// One stage `U^[n]` of the bracket tower as seen by a [`BracketRule`].
pub struct Stage<'a> {
    pub index: usize,
    pub envelope: &'a Envelope,
    /// Basis of `P(U^[n])` in `U` coordinates.
    pub primitives: &'a [SparseVec],
}

impl Stage<'_> {
    /// Coefficients of the degree-one letters in an element of `U`.
    pub fn linear_part(&self, u: &SparseVec) -> SparseVec {
        let env = self.envelope;
        SparseVec::from_pairs(
            u.iter()
                .filter(|(i, _)| env.degrees()[*i] == 1)
                .map(|(i, c)| (env.normal_words()[i].0[0] as usize, c.clone()))
                .collect(),
        )
    }

    /// `i^{-1}(u)` when `u` lies in the image of `V`.
    pub fn preimage_in_v(&self, u: &SparseVec) -> Option<SparseVec> {
        let env = self.envelope;
        let coefs = solve_in_span(env.field(), &env.generators().elements, u, env.dim())?;
        Some(SparseVec::from_dense(&coefs))
    }

    /// Homogeneous components of degree ≥ 2 of an element of `T`, as
    /// lexicographic vectors; valid at stage 0 where `U^[0] = T`.
    fn higher_components(&self, u: &SparseVec) -> Vec<(usize, SparseVec)> {
        let env = self.envelope;
        let d = env.presentation().space().dim();
        let mut parts: HashMap<usize, SparseVec> = HashMap::new();
        for (i, c) in u.iter() {
            let w = &env.normal_words()[i];
            if w.degree() >= 2 {
                parts
                    .entry(w.degree())
                    .or_default()
                    .axpy(c, &SparseVec::unit(crate::braided::lex_rank(w, d), env.field()));
            }
        }
        let mut out: Vec<_> = parts.into_iter().collect();
        out.sort_by_key(|(k, _)| *k);
        out
    }

    fn beyond_v(&self, p: &SparseVec) -> EnvError {
        EnvError::Bracket(format!(
            "stage {}: the rule has no value on the primitive {} outside V",
            self.index,
            self.envelope.render(p)
        ))
    }
}

/// Produces `b^[n]` on the primitives of each stage: `b(p)` as coordinates
/// in `V`, one per primitive basis vector.
pub trait BracketRule: Send + Sync {
    fn bracket(&self, stage: &Stage<'_>) -> Result<Vec<SparseVec>, EnvError>;
}

/// `b^[n]` = projection onto the degree-one part: the symmetric algebras.
pub struct TrivialRule;

impl BracketRule for TrivialRule {
    fn bracket(&self, stage: &Stage<'_>) -> Result<Vec<SparseVec>, EnvError> {
        Ok(stage.primitives.iter().map(|p| stage.linear_part(p)).collect())
    }
}

/// Rank-one brackets: `β` on `E(V, c)` at stage 0 and `i^{-1}` afterwards.
pub struct RankOneRule(RankOneMap);

impl RankOneRule {
    pub fn new(s: &BraidedSpace, beta: &[(TensorElement, SparseVec)], truncation: usize) -> Result<Self, EnvError> {
        Ok(RankOneRule(RankOneMap::new(s, beta, truncation)?))
    }
}

impl BracketRule for RankOneRule {
    fn bracket(&self, stage: &Stage<'_>) -> Result<Vec<SparseVec>, EnvError> {
        stage
            .primitives
            .iter()
            .map(|p| {
                if stage.index > 0 {
                    return stage.preimage_in_v(p).ok_or_else(|| stage.beyond_v(p));
                }
                let mut out = stage.linear_part(p);
                for (k, part) in stage.higher_components(p) {
                    let value = self.0.apply(k, &part).ok_or_else(|| stage.beyond_v(p))?;
                    out.axpy(&stage.envelope.field().one(), &value);
                }
                Ok(out)
            })
            .collect()
    }
}

/// Lie algebras with the flip braiding in characteristic 0: a Lie
/// polynomial `p` of degree `k` satisfies `p = (1/k) Σ p_w [w]` with `[w]`
/// the left-normed bracket (Dynkin–Specht–Wever), evaluated in `V`.
pub struct LieRule(pub LieBracket);

impl LieRule {
    fn left_normed(&self, w: &Word, field: Field) -> SparseVec {
        let mut acc = SparseVec::unit(w.0[0] as usize, field);
        for &l in &w.0[1..] {
            acc = self.0.bracket(&acc, &SparseVec::unit(l as usize, field));
        }
        acc
    }
}

impl BracketRule for LieRule {
    fn bracket(&self, stage: &Stage<'_>) -> Result<Vec<SparseVec>, EnvError> {
        let env = stage.envelope;
        let field = env.field();
        if field.characteristic() != 0 {
            return Err(EnvError::Bracket("the Dynkin map needs characteristic 0".into()));
        }
        stage
            .primitives
            .iter()
            .map(|p| {
                if stage.index > 0 {
                    return stage.preimage_in_v(p).ok_or_else(|| stage.beyond_v(p));
                }
                let mut out = SparseVec::new();
                for (i, c) in p.iter() {
                    let w = &env.normal_words()[i];
                    let scale = c * &field.fraction(1, w.degree() as i64)?;
                    out.axpy(&scale, &self.left_normed(w, field));
                }
                Ok(out)
            })
            .collect()
    }
}

/// Reads `b^[0]` off a reference presentation in which every primitive of
/// `T` reduces to an element of `V`; `i^{-1}` afterwards.
pub struct NormalFormRule(pub FilteredPresentation);

impl BracketRule for NormalFormRule {
    fn bracket(&self, stage: &Stage<'_>) -> Result<Vec<SparseVec>, EnvError> {
        let env = stage.envelope;
        stage
            .primitives
            .iter()
            .map(|p| {
                if stage.index > 0 {
                    return stage.preimage_in_v(p).ok_or_else(|| stage.beyond_v(p));
                }
                let reduced = self.0.normal_form(&env.lift(p)).ok_or_else(|| stage.beyond_v(p))?;
                if reduced.keys().any(|w| w.degree() != 1) {
                    return Err(stage.beyond_v(p));
                }
                Ok(SparseVec::from_pairs(
                    reduced.into_iter().map(|(w, c)| (w.0[0] as usize, c)).collect(),
                ))
            })
            .collect()
    }
}

/// The built-in tower rule for a bracket datum.
pub fn builtin_rule(
    s: &BraidedSpace,
    b: &BracketSpec,
    truncation: usize,
    headroom: usize,
) -> Result<std::sync::Arc<dyn BracketRule>, EnvError> {
    use std::sync::Arc;
    Ok(match b {
        BracketSpec::Trivial => Arc::new(TrivialRule),
        BracketSpec::Rank1Map(beta) => Arc::new(RankOneRule::new(s, beta, truncation)?),
        BracketSpec::LieFlip(bracket) => Arc::new(LieRule(bracket.clone())),
        BracketSpec::RestrictedFlip { .. } | BracketSpec::Relations(_) => {
            let rels = super::relations::relations_from_bracket(s, b, truncation)?;
            let reference = filtered_ideal_certified(s, &rels, truncation, headroom, DEFAULT_MAX_HEADROOM)?;
            Arc::new(NormalFormRule(reference))
        }
        BracketSpec::CustomTower(rule) => rule.clone(),
    })
}

/// Per-stage record of a tower run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageReport {
    pub index: usize,
    pub filtration_dims: Vec<usize>,
    pub graded_dims: Vec<usize>,
    pub headroom: usize,
    pub primitive_dim: usize,
    /// `dim W^[n] = dim Ker b^[n]`.
    pub kernel_dim: usize,
    /// `Ker b = Im(Id − ib)` and `P = Ker b ⊕ V^[n]`.
    pub splits: bool,
    /// `Ker b = Ker π ∩ P` for the projection to the next stage; `None`
    /// when no next stage was built.
    pub kernel_is_projection_kernel: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct TowerEnvelope {
    pub presentation: FilteredPresentation,
    pub stages: Vec<StageReport>,
    /// The stage at which no new relation appeared.
    pub stabilized_at: Option<usize>,
    /// False if `V → U^[n]` failed to be injective at some stage.
    pub injective: bool,
}

/// Iterates `U^[n+1] = U^[n] / ([Id − i b][P^[n]])` from `U^[0] = T` for at
/// most `max_stages` steps.
pub fn tower_envelope(
    s: &BraidedSpace,
    rule: &dyn BracketRule,
    truncation: usize,
    headroom: usize,
    max_stages: usize,
) -> Result<TowerEnvelope, EnvError> {
    let field = s.field();
    let d = s.dim();
    let mut rels = RelationSet::default();
    let mut pres = filtered_ideal_certified(s, &rels, truncation, headroom, DEFAULT_MAX_HEADROOM)?;
    let mut stages = Vec::new();
    let mut injective = true;
    for index in 0..=max_stages {
        let env = Envelope::new(pres.clone())?;
        injective &= env.is_injective_on_v();
        let primitives = env.primitive_basis();
        let np = primitives.len();
        let stage = Stage {
            index,
            envelope: &env,
            primitives: &primitives,
        };
        let b = rule.bracket(&stage)?;
        if b.len() != np || b.iter().any(|v| v.max_index().is_some_and(|k| k >= d)) {
            return Err(EnvError::Bracket(format!(
                "stage {index}: the rule returned malformed values"
            )));
        }
        // i: V → P in primitive coordinates.
        let iota: Vec<SparseVec> = env
            .generators()
            .elements
            .iter()
            .map(|x| {
                solve_in_span(field, &primitives, x, env.dim())
                    .map(|c| SparseVec::from_dense(&c))
                    .ok_or_else(|| EnvError::Inconsistent(format!("stage {index}: V is not primitive")))
            })
            .collect::<Result<_, _>>()?;
        let ib = |coords: &SparseVec| -> SparseVec {
            let mut out = SparseVec::new();
            for (k, c) in coords.iter() {
                for (a, v) in b[k].iter() {
                    out.axpy(&(c * v), &iota[a]);
                }
            }
            out
        };
        for (a, x) in iota.iter().enumerate() {
            let mut value = SparseVec::new();
            for (k, c) in x.iter() {
                value.axpy(c, &b[k]);
            }
            if value != SparseVec::unit(a, field) {
                return Err(EnvError::Bracket(format!(
                    "stage {index}: b ∘ i differs from Id on x{}",
                    a + 1
                )));
            }
        }
        check_bracket_braiding(&env, &primitives, &b, index)?;

        let kernel_b = kernel_of_images(field, &b, d);
        let complement: Vec<SparseVec> = (0..np)
            .map(|k| {
                let unit = SparseVec::unit(k, field);
                unit.sub(&ib(&unit), field)
            })
            .collect();
        let image = Subspace::span(field, np, complement.iter().cloned());
        let v_part = Subspace::span(field, np, iota.iter().cloned());
        let splits = image == kernel_b && kernel_b.dim() + v_part.dim() == np && kernel_b.sum(&v_part)?.dim() == np;
        let mut report = StageReport {
            index,
            filtration_dims: pres.filtration_dims(),
            graded_dims: pres.graded_dims(),
            headroom: pres.headroom(),
            primitive_dim: np,
            kernel_dim: kernel_b.dim(),
            splits,
            kernel_is_projection_kernel: None,
        };
        if image.is_zero() {
            stages.push(report);
            return Ok(TowerEnvelope {
                presentation: pres,
                stages,
                stabilized_at: Some(index),
                injective,
            });
        }
        if index == max_stages {
            stages.push(report);
            break;
        }
        for v in image.basis() {
            let mut u = SparseVec::new();
            for (k, c) in v.iter() {
                u.axpy(c, &primitives[k]);
            }
            rels.relations.push(Relation::from_terms(env.lift(&u))?);
        }
        let next = filtered_ideal_certified(s, &rels, truncation, headroom, DEFAULT_MAX_HEADROOM)?;
        let projected: Vec<SparseVec> = primitives
            .iter()
            .map(|p| {
                let v = next.words().vector(&env.lift(p)).expect("within truncation");
                next.ideal().reduce(&v)
            })
            .collect();
        let kernel_pi = kernel_of_images(field, &projected, next.words().len());
        report.kernel_is_projection_kernel = Some(kernel_pi == kernel_b);
        stages.push(report);
        pres = next;
    }
    Ok(TowerEnvelope {
        presentation: pres,
        stages,
        stabilized_at: None,
        injective,
    })
}

/// `c(ib ⊗ id) = (id ⊗ ib) c` on `P ⊗ V` and `c(id ⊗ ib) = (ib ⊗ id) c` on
/// `V ⊗ P`, with both sides computed in `U ⊗ U`.
fn check_bracket_braiding(
    env: &Envelope,
    primitives: &[SparseVec],
    b: &[SparseVec],
    index: usize,
) -> Result<(), EnvError> {
    if !env.is_injective_on_v() {
        return Ok(());
    }
    let field = env.field();
    let dim = env.dim();
    let letters = &env.generators().elements;
    let letter_of: HashMap<usize, usize> = letters
        .iter()
        .enumerate()
        .filter_map(|(a, x)| match x.entries() {
            [(i, c)] if c.is_one() => Some((*i, a)),
            _ => None,
        })
        .collect();
    if letter_of.len() != letters.len() {
        return Ok(());
    }
    let ib_u = |p: &SparseVec| -> Option<SparseVec> {
        let coefs = solve_in_span(field, primitives, p, dim)?;
        let mut out = SparseVec::new();
        for (k, c) in coefs.iter().enumerate() {
            for (a, v) in b[k].iter() {
                out.axpy(&(c * v), &letters[a]);
            }
        }
        Some(out)
    };
    let fail = |side: &str, p: &SparseVec, a: usize| {
        EnvError::Bracket(format!(
            "stage {index}: bracket compatibility {side} fails on ({}, {})",
            env.render(p),
            env.presentation().space().labels()[a]
        ))
    };
    for p in primitives {
        let bp = ib_u(p).expect("p is primitive");
        for (a, x) in letters.iter().enumerate() {
            for right in [true, false] {
                let (lhs, crossed) = if right {
                    (env.braid(&bp, x), env.braid(p, x))
                } else {
                    (env.braid(x, &bp), env.braid(x, p))
                };
                // Split the crossed element along the V factor.
                let mut parts: HashMap<usize, SparseVec> = HashMap::new();
                for (idx, c) in crossed.iter() {
                    let (v_idx, other) = if right {
                        (idx / dim, idx % dim)
                    } else {
                        (idx % dim, idx / dim)
                    };
                    let Some(&letter) = letter_of.get(&v_idx) else {
                        return Err(fail(
                            if right {
                                "c(ib⊗V) = (V⊗ib)c"
                            } else {
                                "c(V⊗ib) = (ib⊗V)c"
                            },
                            p,
                            a,
                        ));
                    };
                    parts.entry(letter).or_default().axpy(c, &SparseVec::unit(other, field));
                }
                let mut rhs = SparseVec::new();
                for (letter, part) in parts {
                    let image = ib_u(&part).ok_or_else(|| fail("(restriction to P)", p, a))?;
                    let term = if right {
                        letters[letter].tensor(&image, dim)
                    } else {
                        image.tensor(&letters[letter], dim)
                    };
                    rhs.axpy(&field.one(), &term);
                }
                if lhs != rhs {
                    return Err(fail(
                        if right {
                            "c(ib⊗V) = (V⊗ib)c"
                        } else {
                            "c(V⊗ib) = (ib⊗V)c"
                        },
                        p,
                        a,
                    ));
                }
            }
        }
    }
    Ok(())
}

/// `T(V, c)` truncated at `N`, viewed as the enveloping algebra of its
/// primitives: the generating space is `P(T)` with its induced braiding.
pub fn kharchenko_fixture(s: &BraidedSpace, truncation: usize) -> Result<Envelope, EnvError> {
    let pres = FilteredPresentation::from_graded(&free_presentation(s, truncation)?);
    Envelope::with_primitive_generators(pres)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KhaCosymStage {
    pub stage: usize,
    pub cosymmetric: bool,
    /// The rank bound `stage + 1` implied by cosymmetry.
    pub implied_rank_bound: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KhaCosymReport {
    pub rank: Option<usize>,
    pub stages: Vec<KhaCosymStage>,
}

/// For every stage `S^[n]` of the symmetric-algebra tower that is
/// cosymmetric, the tower must stabilize by stage `n + 1`.
pub fn khacosym_consistency(s: &BraidedSpace, truncation: usize, margin: usize) -> Result<KhaCosymReport, EnvError> {
    let (outcome, trace) = combinatorial_rank(s, truncation, truncation)?;
    let rank = match outcome {
        RankOutcome::Certified { rank, .. } => Some(rank),
        RankOutcome::Exceeded { .. } => None,
    };
    let mut stages = Vec::new();
    for (n, stage) in trace.stages.iter().enumerate() {
        let env = Envelope::new(FilteredPresentation::from_graded(stage))?;
        let data = coradical_filtration(&env, margin)?;
        let cosymmetric = cosymmetric_check(&env, &data)?.holds;
        if cosymmetric && !rank.is_some_and(|r| r <= n + 1) {
            return Err(EnvError::Inconsistent(format!(
                "S^[{n}] is cosymmetric at truncation {truncation} but the tower has not stabilized by stage {} \
                 (rank {rank:?}); raise the truncation to separate a truncation artifact from a defect",
                n + 1
            )));
        }
        stages.push(KhaCosymStage {
            stage: n,
            cosymmetric,
            implied_rank_bound: cosymmetric.then_some(n + 1),
        });
    }
    Ok(KhaCosymReport { rank, stages })
}
