use std::collections::HashMap;

use crate::braided::{LinComb, Word, WordBasis, DEFAULT_FACTORIAL_BUDGET};
use crate::linalg::{kernel_of_images, EchelonBuilder, Matrix, SparseVec, Subspace};

use super::analysis::{top_echelon, CheckResult, Envelope, Generators};
use super::EnvError;

/// Coradical terms of `U_(N)` are trusted up to level `N − margin`.
pub const DEFAULT_VALIDITY_MARGIN: usize = 1;

/// The coradical filtration of `U_(N)`, the primitive space with its
/// braiding, and the linearization data.
#[derive(Debug)]
pub struct CoradicalData {
    /// `levels[m]` is the coradical term `U_m` in `U` coordinates.
    pub levels: Vec<Subspace>,
    /// `P(U)` with the induced braiding `c_P`.
    pub primitives: Generators,
    /// Highest level at which the terms are free of truncation effects.
    pub validity: usize,
    /// A basis of `U` adapted to the filtration, its levels, and the dual
    /// functionals (`duals[k] · u` is the `k`-th coordinate of `u`).
    basis: Vec<SparseVec>,
    level_of: Vec<usize>,
    duals: Vec<SparseVec>,
    /// `μ` of every adapted basis vector up to the validity bound, as
    /// combinations of words in the letters of `P(U)`.
    mu: Vec<Option<LinComb>>,
}

/// `μ_m` on a complement of `U_{m−1}` in `U_m`: `columns[k]` is the image
/// of `domain[k]` on the weight-bounded word basis of `P(U)^{⊗m}`.
#[derive(Clone, Debug)]
pub struct Linearization {
    pub level: usize,
    pub domain: Vec<SparseVec>,
    pub basis: WordBasis,
    pub columns: Vec<SparseVec>,
}

/// `U_m^+ = { u ∈ U⁺ : Δ̄u ∈ U_{m−1}^+ ⊗ U }`, iterated until it exhausts
/// `U⁺`.
pub fn coradical_filtration(env: &Envelope, margin: usize) -> Result<CoradicalData, EnvError> {
    let field = env.field();
    let dim = env.dim();
    let n_max = env.truncation();
    let unit = SparseVec::unit(0, field);
    let mut plus = vec![Subspace::zero(field, dim)];
    while plus.last().unwrap().dim() < dim - 1 {
        if plus.len() > n_max {
            return Err(EnvError::Inconsistent(format!(
                "the coradical filtration does not exhaust U_({n_max}) by level {n_max}"
            )));
        }
        let prev = plus.last().unwrap();
        let images: Vec<SparseVec> = (1..dim)
            .map(|j| {
                let delta = env.reduced_coproduct(&SparseVec::unit(j, field));
                let mut slices: HashMap<usize, SparseVec> = HashMap::new();
                for (idx, c) in delta.iter() {
                    slices
                        .entry(idx % dim)
                        .or_default()
                        .axpy(c, &SparseVec::unit(idx / dim, field));
                }
                let mut out = SparseVec::new();
                for (right, left) in slices {
                    let rest = prev.reduce(&left);
                    out.axpy(&field.one(), &rest.tensor(&SparseVec::unit(right, field), dim));
                }
                out
            })
            .collect();
        let kernel = kernel_of_images(field, &images, dim * dim);
        plus.push(Subspace::span(
            field,
            dim,
            kernel.basis().iter().map(|v| v.map_indices(|k| k + 1)),
        ));
    }
    let levels: Vec<Subspace> = plus
        .iter()
        .map(|p| {
            p.sum(&Subspace::span(field, dim, [unit.clone()]))
                .expect("same ambient")
        })
        .collect();

    let p_basis = top_echelon(field, dim, plus.get(1).map(|p| p.basis().to_vec()).unwrap_or_default());
    let primitives = env.induced_generators(p_basis.clone())?;

    let mut basis = vec![unit];
    let mut level_of = vec![0];
    for v in &p_basis {
        basis.push(v.clone());
        level_of.push(1);
    }
    for m in 2..plus.len() {
        let mut builder = EchelonBuilder::new(field, dim);
        for r in plus[m - 1].basis() {
            builder.insert(r.clone());
        }
        for r in plus[m].basis() {
            if builder.insert(r.clone()) {
                basis.push(r.clone());
                level_of.push(m);
            }
        }
    }
    let inverse = Matrix::from_rows(field, dim, basis.clone())?
        .inverse()
        .ok_or_else(|| EnvError::Inconsistent("adapted basis is singular".into()))?;
    let duals = inverse.transpose().rows().to_vec();

    let validity = n_max.saturating_sub(margin);
    let mut data = CoradicalData {
        levels,
        primitives,
        validity,
        basis,
        level_of,
        duals,
        mu: Vec::new(),
    };
    data.mu = data.compute_mu(env)?;
    Ok(data)
}

impl CoradicalData {
    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    /// `dim U_m − dim U_{m−1}` for every computed level.
    pub fn graded_dims(&self) -> Vec<usize> {
        (0..self.levels.len())
            .map(|m| self.levels[m].dim() - if m == 0 { 0 } else { self.levels[m - 1].dim() })
            .collect()
    }

    fn level_indices(&self, m: usize) -> Vec<usize> {
        (0..self.basis.len()).filter(|&k| self.level_of[k] == m).collect()
    }

    /// `μ_m(b) = Σ X_kl μ_{m−1}(b_k) ⊗ p_l` where `X_kl` are the coordinates
    /// of `Δ̄b` on level `m − 1` ⊗ level 1.
    fn compute_mu(&self, env: &Envelope) -> Result<Vec<Option<LinComb>>, EnvError> {
        let field = env.field();
        let dim = env.dim();
        let mut mu: Vec<Option<LinComb>> = vec![None; self.basis.len()];
        let first = self.level_indices(1);
        for (letter, &k) in first.iter().enumerate() {
            let mut terms = LinComb::new();
            terms.insert(Word::letter(letter), field.one());
            mu[k] = Some(terms);
        }
        for m in 2..=self.validity.min(self.levels.len() - 1) {
            let lower = self.level_indices(m - 1);
            for b in self.level_indices(m) {
                let delta = env.reduced_coproduct(&self.basis[b]);
                let mut out = LinComb::new();
                for (letter, &l) in first.iter().enumerate() {
                    let f_l = &self.duals[l];
                    let mut t = SparseVec::new();
                    for (idx, c) in delta.iter() {
                        if let Some(y) = f_l.get(idx % dim) {
                            t.axpy(&(c * y), &SparseVec::unit(idx / dim, field));
                        }
                    }
                    if t.is_zero() {
                        continue;
                    }
                    for &k in &lower {
                        let x = self.duals[k].dot(&t, field);
                        if x.is_zero() {
                            continue;
                        }
                        for (w, c) in mu[k].as_ref().expect("lower level computed") {
                            let key = w.concat(&Word::letter(letter));
                            let e = out.entry(key.clone()).or_insert_with(|| field.zero());
                            *e += &(&x * c);
                            if e.is_zero() {
                                out.remove(&key);
                            }
                        }
                    }
                }
                mu[b] = Some(out);
            }
        }
        Ok(mu)
    }
}

/// `μ_m` on the level-`m` part of the adapted basis, asserting injectivity.
pub fn linearization_map(env: &Envelope, data: &CoradicalData, m: usize) -> Result<Linearization, EnvError> {
    if m == 0 || m > data.validity {
        return Err(EnvError::Validity {
            level: m,
            validity: data.validity,
        });
    }
    let basis = data.primitives.space.bounded_basis(m, env.truncation());
    let mut domain = Vec::new();
    let mut columns = Vec::new();
    for k in data.level_indices(m) {
        let terms = data.mu[k].as_ref().expect("within validity");
        let v = basis
            .vector(terms)
            .ok_or_else(|| EnvError::Inconsistent(format!("μ_{m} leaves the weight bound {}", env.truncation())))?;
        domain.push(data.basis[k].clone());
        columns.push(v);
    }
    let rank = Subspace::span(env.field(), basis.len(), columns.iter().cloned()).dim();
    if rank != columns.len() {
        return Err(EnvError::Inconsistent(format!(
            "the linearization map is not injective at level {m} (rank {rank} < {})",
            columns.len()
        )));
    }
    Ok(Linearization {
        level: m,
        domain,
        basis,
        columns,
    })
}

/// Whether `Im μ_m ⊆ Im 𝔖_m(P(U), c_P)` for `2 ≤ m ≤ validity`.
pub fn cosymmetric_check(env: &Envelope, data: &CoradicalData) -> Result<CheckResult, EnvError> {
    let p = &data.primitives.space;
    for m in 2..=data.validity {
        let lin = linearization_map(env, data, m)?;
        if lin.columns.is_empty() {
            continue;
        }
        let image = p.symmetrizer_on(&lin.basis, DEFAULT_FACTORIAL_BUDGET)?.image();
        for (b, v) in lin.domain.iter().zip(&lin.columns) {
            if !image.contains(v) {
                return Ok(CheckResult::fail("cosymmetric", m, env.render(b)));
            }
        }
    }
    Ok(CheckResult::ok())
}

/// Strict generation in two forms that must agree: `U_m = U^G_(m)` for
/// `m ≤ validity`, and `G^n ∩ U_{n−1} ⊆ U^G_(n−1)` for `n ≤ validity`.
pub fn strictly_generated_check(env: &Envelope, data: &CoradicalData) -> Result<CheckResult, EnvError> {
    let generated = env.generated_filtration()?;
    let products = env.generator_products()?;
    let field = env.field();
    let full = Subspace::full(field, env.dim());
    let level = |m: usize| data.levels.get(m).unwrap_or(&full);

    let mut form_a = CheckResult::ok();
    for (m, step) in generated.iter().enumerate().take(data.validity + 1) {
        if level(m) != step {
            let witness = level(m)
                .basis()
                .iter()
                .find(|v| !step.contains(v))
                .or_else(|| step.basis().iter().find(|v| !level(m).contains(v)))
                .expect("subspaces differ");
            form_a = CheckResult::fail("strictly generated", m, env.render(witness));
            break;
        }
    }

    let mut form_b = CheckResult::ok();
    for n in 2..=data.validity.min(generated.len() - 1) {
        let g_n = Subspace::span(field, env.dim(), products[n].1.iter().cloned());
        let meet = g_n.intersect(level(n - 1))?;
        if let Some(v) = meet.basis().iter().find(|v| !generated[n - 1].contains(v)) {
            form_b = CheckResult::fail("strictly generated", n, env.render(v));
            break;
        }
    }

    if form_a.holds != form_b.holds {
        return Err(EnvError::Inconsistent(format!(
            "strict generation forms disagree: U_m = U_(m) is {}, G^n ∩ U_(n-1) ⊆ U_(n-1) is {} ({:?} / {:?})",
            form_a.holds, form_b.holds, form_a.witness, form_b.witness
        )));
    }
    Ok(form_a)
}

/// Whether `dim U_m/U_{m−1} = dim 𝓑^m(P(U), c_P)` for `m ≤ validity`.
pub fn lifting_check(env: &Envelope, data: &CoradicalData) -> Result<CheckResult, EnvError> {
    let gr = data.graded_dims();
    let p = &data.primitives.space;
    for m in 0..=data.validity {
        let nichols = p
            .symmetrizer_on(&p.bounded_basis(m, env.truncation()), DEFAULT_FACTORIAL_BUDGET)?
            .rank();
        let actual = gr.get(m).copied().unwrap_or(0);
        if actual != nichols {
            return Ok(CheckResult::fail(
                "lifting",
                m,
                format!(
                    "dim U_{m}/U_{} = {actual}, Nichols dimension {nichols}",
                    m.saturating_sub(1)
                ),
            ));
        }
    }
    Ok(CheckResult::ok())
}
