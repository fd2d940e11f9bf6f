//! Graded quotients `T(V, c)/I` truncated at degree `N`, their primitive
//! elements, the tower of symmetric algebras `S^[0] → S^[1] → …` obtained by
//! repeatedly dividing out homogeneous primitives of degree at least two,
//! and Nichols algebra dimensions computed from the tower and, independently,
//! from quantum symmetrizers.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::braided::{BraidError, BraidedSpace, OperatorCache};
use crate::linalg::{kernel_of_images, EchelonBuilder, LinalgError, SparseVec, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TowerError {
    #[error("{property} fails in degree {degree}: {detail}")]
    Verification {
        property: Property,
        degree: String,
        detail: String,
    },
    #[error("degree {degree} is outside 2..={truncation}")]
    DegreeOutOfRange { degree: usize, truncation: usize },
    #[error("tower did not stabilize within {0} steps")]
    NotStabilized(usize),
    #[error("shape error: {0}")]
    Shape(String),
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The three structural properties re-proved for every presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    Ideal,
    Coideal,
    Braiding,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Ideal => "ideal property",
            Property::Coideal => "coideal property",
            Property::Braiding => "braiding compatibility",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VerifiedFlags {
    pub ideal_ok: bool,
    pub coideal_ok: bool,
    pub braiding_ok: bool,
}

/// A graded braided bialgebra `T(V, c)/I` known up to degree `N`.
///
/// `ideal[n]` is `I_n ⊆ V^⊗n` in word coordinates. A value of this type has
/// passed every check in [`GradedPresentation::new`].
#[derive(Clone, Debug)]
pub struct GradedPresentation {
    space: BraidedSpace,
    truncation: usize,
    ideal: Vec<Subspace>,
    verified: VerifiedFlags,
    ops: Arc<OperatorCache>,
}

impl PartialEq for GradedPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.truncation == other.truncation && self.ideal == other.ideal
    }
}

impl Eq for GradedPresentation {}

impl GradedPresentation {
    /// Validates shapes, `I_0 = I_1 = 0`, and the ideal, coideal and
    /// braiding properties.
    pub fn new(space: BraidedSpace, truncation: usize, ideal: Vec<Subspace>) -> Result<Self, TowerError> {
        let ops = Arc::new(OperatorCache::new(&space, truncation));
        Self::with_cache(space, truncation, ideal, ops)
    }

    fn with_cache(
        space: BraidedSpace,
        truncation: usize,
        ideal: Vec<Subspace>,
        ops: Arc<OperatorCache>,
    ) -> Result<Self, TowerError> {
        if truncation == 0 {
            return Err(TowerError::Shape("truncation must be at least 1".into()));
        }
        if ideal.len() != truncation + 1 {
            return Err(TowerError::Shape(format!(
                "{} ideal components for truncation {truncation}",
                ideal.len()
            )));
        }
        for (n, i) in ideal.iter().enumerate() {
            if i.ambient() != space.dim().pow(n as u32) || i.field() != space.field() {
                return Err(TowerError::Shape(format!(
                    "ideal component {n} has the wrong ambient space"
                )));
            }
        }
        if !ideal[0].is_zero() || !ideal[1].is_zero() {
            return Err(TowerError::Shape("I_0 and I_1 must vanish".into()));
        }
        let p = GradedPresentation {
            space,
            truncation,
            ideal,
            verified: VerifiedFlags {
                ideal_ok: false,
                coideal_ok: false,
                braiding_ok: false,
            },
            ops,
        };
        p.check_ideal()?;
        p.check_coideal()?;
        p.check_braiding()?;
        Ok(GradedPresentation {
            verified: VerifiedFlags {
                ideal_ok: true,
                coideal_ok: true,
                braiding_ok: true,
            },
            ..p
        })
    }

    pub fn space(&self) -> &BraidedSpace {
        &self.space
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn ideal(&self) -> &[Subspace] {
        &self.ideal
    }

    pub fn verified(&self) -> VerifiedFlags {
        self.verified
    }

    pub fn operators(&self) -> &OperatorCache {
        &self.ops
    }

    /// `dim V^⊗n / I_n` for `0 ≤ n ≤ N`.
    pub fn quotient_dims(&self) -> Vec<usize> {
        self.ideal.iter().map(|i| i.codim()).collect()
    }

    /// `I_p ⊗ V^⊗q + V^⊗p ⊗ I_q` inside `V^⊗(p+q)`.
    pub fn tensor_ideal(&self, p: usize, q: usize) -> Subspace {
        let (left, right) = self.tensor_ideal_parts(p, q);
        left.sum(&right).expect("same ambient space")
    }

    fn tensor_ideal_parts(&self, p: usize, q: usize) -> (Subspace, Subspace) {
        let field = self.space.field();
        let d = self.space.dim();
        let full = |k: usize| Subspace::full(field, d.pow(k as u32));
        (self.ideal[p].tensor(&full(q)), full(p).tensor(&self.ideal[q]))
    }

    fn check_ideal(&self) -> Result<(), TowerError> {
        for (n, padded) in ideal_padding(&self.space, &self.ideal).into_iter().enumerate() {
            if let Some(bad) = padded.iter().find(|v| !self.ideal[n].contains(v)) {
                return Err(TowerError::Verification {
                    property: Property::Ideal,
                    degree: n.to_string(),
                    detail: format!("padded element {bad:?} lies outside I_{n}"),
                });
            }
        }
        Ok(())
    }

    fn check_coideal(&self) -> Result<(), TowerError> {
        for n in 2..=self.truncation {
            if self.ideal[n].is_zero() {
                continue;
            }
            for p in 1..n {
                let target = self.tensor_ideal(p, n - p);
                let delta = self.ops.delta(p, n - p);
                if let Some(t) = self.ideal[n].basis().iter().find(|t| !target.contains(&delta.apply(t))) {
                    return Err(TowerError::Verification {
                        property: Property::Coideal,
                        degree: format!("{n} (component ({p},{}))", n - p),
                        detail: format!("Δ of {t:?} leaves I⊗T + T⊗I"),
                    });
                }
            }
        }
        Ok(())
    }

    fn check_braiding(&self) -> Result<(), TowerError> {
        for total in 2..=self.truncation {
            for n in 1..total {
                let m = total - n;
                let (a, b) = self.tensor_ideal_parts(n, m);
                if a.is_zero() && b.is_zero() {
                    continue;
                }
                let (c, e) = self.tensor_ideal_parts(m, n);
                let target = e.sum(&c)?;
                let ct = self.ops.crossing(n, m);
                if let Some(v) = a
                    .basis()
                    .iter()
                    .chain(b.basis())
                    .find(|v| !target.contains(&ct.apply(v)))
                {
                    return Err(TowerError::Verification {
                        property: Property::Braiding,
                        degree: format!("({n},{m})"),
                        detail: format!("c_T maps {v:?} outside V⊗I + I⊗V"),
                    });
                }
            }
        }
        Ok(())
    }

    /// Words of degree `n` that are homogeneous in the quotient sense:
    /// reduces `v` modulo `I_n`.
    pub fn reduce(&self, n: usize, v: &SparseVec) -> SparseVec {
        self.ideal[n].reduce(v)
    }

    /// A basis of a complement of `V ⊗ I_{n−1} + I_{n−1} ⊗ V` in `I_n`, for
    /// every degree: minimal homogeneous generators of the ideal.
    pub fn minimal_generators(&self) -> Vec<Vec<SparseVec>> {
        let padded = ideal_padding(&self.space, &self.ideal);
        self.ideal
            .iter()
            .zip(padded)
            .map(|(i, pad)| {
                let mut builder = EchelonBuilder::new(self.space.field(), i.ambient());
                for v in pad {
                    builder.insert(v);
                }
                i.basis()
                    .iter()
                    .filter(|r| builder.insert((*r).clone()))
                    .cloned()
                    .collect()
            })
            .collect()
    }
}

/// `V ⊗ I_{n−1}` and `I_{n−1} ⊗ V` as lists of vectors, per degree.
fn ideal_padding(space: &BraidedSpace, ideal: &[Subspace]) -> Vec<Vec<SparseVec>> {
    let mut out = vec![Vec::new()];
    out.extend(
        ideal
            .iter()
            .take(ideal.len().saturating_sub(1))
            .map(|i| pad_once(space, i)),
    );
    out
}

/// `V ⊗ L + L ⊗ V` for `L ⊆ V^⊗k`, as a list of vectors in `V^⊗(k+1)`.
fn pad_once(space: &BraidedSpace, lower: &Subspace) -> Vec<SparseVec> {
    let d = space.dim();
    let width = lower.ambient();
    let mut pad = Vec::with_capacity(2 * d * lower.dim());
    for row in lower.basis() {
        for l in 0..d {
            pad.push(row.map_indices(|i| l * width + i));
            pad.push(row.map_indices(|i| i * d + l));
        }
    }
    pad
}

/// `S^[0] = T(V, c)` truncated at `N`.
pub fn free_presentation(space: &BraidedSpace, truncation: usize) -> Result<GradedPresentation, TowerError> {
    let field = space.field();
    let ideal = (0..=truncation)
        .map(|n| Subspace::zero(field, space.dim().pow(n as u32)))
        .collect();
    GradedPresentation::new(space.clone(), truncation, ideal)
}

/// The preimage in `V^⊗n` of the primitive elements of degree `n` of the
/// quotient: all `t` with `Δ_{p,q}(t) ∈ I_p ⊗ V^⊗q + V^⊗p ⊗ I_q` for
/// `p, q ≥ 1`, `p + q = n`. Contains `I_n`.
pub fn primitives_of_degree(p: &GradedPresentation, n: usize) -> Result<Subspace, TowerError> {
    if n < 2 || n > p.truncation {
        return Err(TowerError::DegreeOutOfRange {
            degree: n,
            truncation: p.truncation,
        });
    }
    let field = p.space.field();
    let dim = p.space.dim().pow(n as u32);
    let targets: Vec<Subspace> = (1..n).map(|a| p.tensor_ideal(a, n - a)).collect();
    let images: Vec<SparseVec> = (0..dim)
        .map(|j| {
            let mut img = SparseVec::new();
            for (k, target) in targets.iter().enumerate() {
                let a = k + 1;
                let reduced = target.reduce(p.ops.delta(a, n - a).column(j));
                img.axpy(&field.one(), &reduced.map_indices(|i| k * dim + i));
            }
            img
        })
        .collect();
    Ok(kernel_of_images(field, &images, (n - 1) * dim))
}

/// `I_m = Σ_{i+k+j=m} V^⊗i ⊗ G_k ⊗ V^⊗j` for `m ≤ N`. `gens[k]` is `G_k`;
/// missing degrees count as zero.
pub fn ideal_closure(gens: &[Subspace], space: &BraidedSpace, truncation: usize) -> Vec<Subspace> {
    let field = space.field();
    let mut ideal: Vec<Subspace> = Vec::with_capacity(truncation + 1);
    for m in 0..=truncation {
        let ambient = space.dim().pow(m as u32);
        let mut vectors: Vec<SparseVec> = match gens.get(m) {
            Some(g) => g.basis().to_vec(),
            None => Vec::new(),
        };
        if m >= 1 {
            vectors.extend(pad_once(space, &ideal[m - 1]));
        }
        ideal.push(Subspace::span(field, ambient, vectors));
    }
    ideal
}

/// One step of the tower: divide out the primitives of degrees `2..=N` and
/// re-verify the result.
pub fn tower_step(p: &GradedPresentation) -> Result<GradedPresentation, TowerError> {
    step_with_dims(p).map(|(next, _)| next)
}

fn step_with_dims(p: &GradedPresentation) -> Result<(GradedPresentation, Vec<usize>), TowerError> {
    let field = p.space.field();
    let mut gens: Vec<Subspace> = vec![Subspace::zero(field, 1), Subspace::zero(field, p.space.dim())];
    let mut new_dims = vec![0, 0];
    for n in 2..=p.truncation {
        let prim = primitives_of_degree(p, n)?;
        new_dims.push(prim.dim() - p.ideal[n].dim());
        gens.push(prim);
    }
    let ideal = ideal_closure(&gens, &p.space, p.truncation);
    let next = GradedPresentation::with_cache(p.space.clone(), p.truncation, ideal, p.ops.clone())?;
    Ok((next, new_dims))
}

/// The stages `S^[0], S^[1], …` of a tower computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerTrace {
    pub stages: Vec<GradedPresentation>,
    /// `new_primitive_dims[k][n]`: primitives of degree `n` in `S^[k]` modulo
    /// `I_n`.
    pub new_primitive_dims: Vec<Vec<usize>>,
    pub stabilized_at: Option<usize>,
}

/// Combinatorial rank as far as the truncation can certify it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankOutcome {
    /// `S^[k] = S^[k+1]` up to degree `N`, and no earlier stage is stable.
    Certified {
        rank: usize,
        truncation: usize,
    },
    Exceeded {
        max_steps: usize,
    },
}

impl fmt::Display for RankOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankOutcome::Certified { rank, truncation } => {
                write!(f, "{rank} ({truncation}-certified)")
            }
            RankOutcome::Exceeded { max_steps } => write!(f, "exceeded {max_steps} steps"),
        }
    }
}

/// Runs the tower from `S^[0] = T(V, c)` until two consecutive stages agree
/// up to degree `N`, taking at most `max_steps + 1` steps.
pub fn combinatorial_rank(
    space: &BraidedSpace,
    truncation: usize,
    max_steps: usize,
) -> Result<(RankOutcome, TowerTrace), TowerError> {
    let mut trace = TowerTrace {
        stages: vec![free_presentation(space, truncation)?],
        new_primitive_dims: Vec::new(),
        stabilized_at: None,
    };
    for k in 0..=max_steps {
        let (next, dims) = step_with_dims(trace.stages.last().unwrap())?;
        trace.new_primitive_dims.push(dims);
        if next.ideal == trace.stages[k].ideal {
            trace.stabilized_at = Some(k);
            return Ok((RankOutcome::Certified { rank: k, truncation }, trace));
        }
        trace.stages.push(next);
    }
    Ok((RankOutcome::Exceeded { max_steps }, trace))
}

/// `dim 𝓑(V, c)^n` for `n ≤ N`, read off the stabilized tower.
pub fn nichols_dims_tower(space: &BraidedSpace, truncation: usize) -> Result<Vec<usize>, TowerError> {
    let (outcome, trace) = combinatorial_rank(space, truncation, truncation)?;
    match outcome {
        RankOutcome::Certified { .. } => Ok(trace.stages.last().unwrap().quotient_dims()),
        RankOutcome::Exceeded { max_steps } => Err(TowerError::NotStabilized(max_steps)),
    }
}

/// `rank 𝔖_n` for `n ≤ N`.
pub fn nichols_dims_symmetrizer(
    space: &BraidedSpace,
    truncation: usize,
    budget: usize,
) -> Result<Vec<usize>, TowerError> {
    (0..=truncation)
        .map(|n| Ok(space.quantum_symmetrizer(n, budget)?.rank()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Field;

    #[test]
    fn free_presentation_dims() {
        let s = BraidedSpace::flip(Field::Rationals, 2).unwrap();
        let p = free_presentation(&s, 4).unwrap();
        assert_eq!(p.quotient_dims(), vec![1, 2, 4, 8, 16]);
        assert!(p.verified().coideal_ok);
    }

    #[test]
    fn closure_of_one_quadratic_generator() {
        let q = Field::Rationals;
        let s = BraidedSpace::flip(q, 2).unwrap();
        let g2 = Subspace::span(q, 4, vec![SparseVec::unit(1, q)]);
        let gens = vec![Subspace::zero(q, 1), Subspace::zero(q, 2), g2];
        let ideal = ideal_closure(&gens, &s, 3);
        assert_eq!(ideal[3].dim(), 4);
        assert!(ideal_closure(&[], &s, 3).iter().all(|i| i.is_zero()));
    }

    #[test]
    fn shape_errors() {
        let s = BraidedSpace::flip(Field::Rationals, 2).unwrap();
        let p = free_presentation(&s, 3).unwrap();
        assert!(matches!(
            primitives_of_degree(&p, 4),
            Err(TowerError::DegreeOutOfRange {
                degree: 4,
                truncation: 3
            })
        ));
        assert!(primitives_of_degree(&p, 1).is_err());
    }
}
