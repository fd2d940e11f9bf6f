use crate::braided::Word;
use crate::linalg::EchelonBuilder;

use super::analysis::{CheckResult, Envelope, Witness};
use super::coradical::{coradical_filtration, cosymmetric_check, lifting_check, strictly_generated_check};
use super::EnvError;

/// Verdicts about an enveloping algebra; the coalgebraic verdicts are
/// `None` until [`teopbw_crosscheck`] runs them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PBWReport {
    /// `dim 𝔊^n(U)` for the filtration generated by `G`.
    pub graded_dims: Vec<usize>,
    /// `dim 𝓑^n(G, c_G)`.
    pub nichols_dims: Vec<usize>,
    /// Whether `ϑ_U` factors through the Nichols algebra.
    pub omega_exists: bool,
    pub pbw_type: bool,
    pub strictly_generated: Option<bool>,
    pub cosymmetric: Option<bool>,
    pub lifting_ok: Option<bool>,
    pub witnesses: Vec<Witness>,
}

/// Whether every element of `ker 𝔖_n(G)` maps into `U^G_(n−1)`, i.e. the
/// Nichols ideal vanishes in `𝔊(U)`.
pub fn theta_factors_check(env: &Envelope) -> Result<CheckResult, EnvError> {
    let products = env.generator_products()?;
    let symmetrizers = env.generator_symmetrizers()?;
    let filtration = env.generated_filtration()?;
    for n in 1..products.len() {
        let (basis, images) = &products[n];
        for v in symmetrizers[n].kernel().basis() {
            let mut image = crate::linalg::SparseVec::new();
            for (w, c) in v.iter() {
                image.axpy(c, &images[w]);
            }
            if !filtration[n - 1].contains(&image) {
                return Ok(CheckResult::fail(
                    "theta factors",
                    n,
                    env.render_generator_word(&basis.terms(v)),
                ));
            }
        }
    }
    Ok(CheckResult::ok())
}

/// PBW type: `ϑ_U` factors through `𝓑(G)` and the graded dimensions agree.
pub fn pbw_check(env: &Envelope) -> Result<PBWReport, EnvError> {
    let graded_dims = env.generated_graded_dims()?;
    let nichols_dims = env.nichols_dims()?;
    let theta = theta_factors_check(env)?;
    let mut witnesses: Vec<Witness> = theta.witness.iter().cloned().collect();
    if let Some(n) = (0..graded_dims.len()).find(|&n| graded_dims[n] != nichols_dims[n]) {
        witnesses.push(Witness {
            check: "graded dims".into(),
            degree: n,
            element: format!("dim 𝔊^{n} = {}, Nichols dimension {}", graded_dims[n], nichols_dims[n]),
        });
    }
    Ok(PBWReport {
        pbw_type: theta.holds && graded_dims == nichols_dims,
        omega_exists: theta.holds,
        graded_dims,
        nichols_dims,
        strictly_generated: None,
        cosymmetric: None,
        lifting_ok: None,
        witnesses,
    })
}

/// Monomials whose images form a basis of `U`: per degree, the
/// lexicographically greedy words with independent symmetrizer images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PbwBasis {
    pub per_degree: Vec<Vec<Word>>,
    pub labels: Vec<String>,
}

impl PbwBasis {
    pub fn render(&self) -> Vec<Vec<String>> {
        self.per_degree
            .iter()
            .map(|ws| ws.iter().map(|w| w.render(&self.labels)).collect())
            .collect()
    }

    pub fn len(&self) -> usize {
        self.per_degree.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Selects `W_n` and verifies `U_(n) = U_(n−1) ⊕ span π(W_n)`.
pub fn pbw_basis(env: &Envelope) -> Result<PbwBasis, EnvError> {
    if !pbw_check(env)?.pbw_type {
        return Err(EnvError::Precondition(
            "pbw_basis requires an algebra of PBW type".into(),
        ));
    }
    let field = env.field();
    let products = env.generator_products()?;
    let symmetrizers = env.generator_symmetrizers()?;
    let filtration = env.generated_filtration()?;
    let mut per_degree = Vec::with_capacity(products.len());
    for n in 0..products.len() {
        let (basis, images) = &products[n];
        let op = &symmetrizers[n];
        let mut nichols = EchelonBuilder::new(field, op.dim_out());
        let mut modulo = EchelonBuilder::new(field, env.dim());
        if n > 0 {
            for r in filtration[n - 1].basis() {
                modulo.insert(r.clone());
            }
        }
        let mut selected = Vec::new();
        for (k, image) in images.iter().enumerate() {
            if nichols.insert(op.column(k).clone()) {
                if !modulo.insert(image.clone()) {
                    return Err(EnvError::Inconsistent(format!(
                        "selected monomial {} is dependent modulo U_({})",
                        basis.word(k).render(env.generators().space.labels()),
                        n.saturating_sub(1)
                    )));
                }
                selected.push(basis.word(k).clone());
            }
        }
        let below = if n == 0 { 0 } else { filtration[n - 1].dim() };
        if filtration[n].dim() != below + selected.len() {
            return Err(EnvError::Inconsistent(format!(
                "dim U_({n}) = {} but U_({}) plus the selected monomials has dimension {}",
                filtration[n].dim(),
                n.saturating_sub(1),
                below + selected.len()
            )));
        }
        per_degree.push(selected);
    }
    Ok(PbwBasis {
        per_degree,
        labels: env.generators().space.labels().to_vec(),
    })
}

/// Runs every check and requires PBW type, strict generation, cosymmetry
/// and the lifting property to coincide.
pub fn teopbw_crosscheck(env: &Envelope, margin: usize) -> Result<PBWReport, EnvError> {
    let mut report = pbw_check(env)?;
    let data = coradical_filtration(env, margin)?;
    let strict = strictly_generated_check(env, &data)?;
    let cosym = cosymmetric_check(env, &data)?;
    let lifting = lifting_check(env, &data)?;
    for r in [&strict, &cosym, &lifting] {
        report.witnesses.extend(r.witness.iter().cloned());
    }
    report.strictly_generated = Some(strict.holds);
    report.cosymmetric = Some(cosym.holds);
    report.lifting_ok = Some(lifting.holds);
    let verdicts = [report.pbw_type, strict.holds, cosym.holds, lifting.holds];
    if verdicts.iter().any(|&v| v != verdicts[0]) {
        return Err(EnvError::Inconsistent(format!(
            "PBW type {}, strictly generated {}, cosymmetric {}, lifting {}; witnesses: {:?}",
            verdicts[0], verdicts[1], verdicts[2], verdicts[3], report.witnesses
        )));
    }
    Ok(report)
}
