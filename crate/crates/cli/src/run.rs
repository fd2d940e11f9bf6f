//! Subcommand execution; every result is a JSON value with sorted keys.

use braidkit_core::braided::TensorElement;
use braidkit_core::enveloping::{
    builtin_rule, coradical_filtration, cosymmetric_check, filtered_ideal, filtered_ideal_certified,
    khacosym_consistency, kharchenko_fixture, pbw_basis, pbw_check, relations_from_bracket, teopbw_crosscheck,
    tower_envelope, Envelope, TowerEnvelope, Witness,
};
use braidkit_core::tower::{
    combinatorial_rank, free_presentation, nichols_dims_symmetrizer, nichols_dims_tower, primitives_of_degree,
    RankOutcome,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::spec::{Construction, Problem, ProblemSpec};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Command {
    Qybe,
    Nichols,
    Rank,
    Primitives,
    Envelope,
    Pbw,
    PbwBasis,
    Corad,
    Cosym,
    Crosscheck,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Command::Qybe,
        Command::Nichols,
        Command::Rank,
        Command::Primitives,
        Command::Envelope,
        Command::Pbw,
        Command::PbwBasis,
        Command::Corad,
        Command::Cosym,
        Command::Crosscheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Qybe => "qybe",
            Command::Nichols => "nichols",
            Command::Rank => "rank",
            Command::Primitives => "primitives",
            Command::Envelope => "envelope",
            Command::Pbw => "pbw",
            Command::PbwBasis => "pbw-basis",
            Command::Corad => "corad",
            Command::Cosym => "cosym",
            Command::Crosscheck => "crosscheck",
        }
    }

    pub fn from_name(name: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == name)
    }
}

/// Parameters the verdicts depend on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certification {
    pub truncation: usize,
    pub headroom: usize,
    /// Headroom at which `F_N` was certified stable, when an envelope was built.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub headroom_used: Option<usize>,
    pub max_headroom: usize,
    pub validity_margin: usize,
    pub factorial_budget: usize,
    pub max_stages: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub spec: ProblemSpec,
    pub certification: Certification,
    pub result: Value,
}

/// An enveloping algebra together with how it was obtained.
pub struct Built {
    pub envelope: Envelope,
    pub headroom_used: usize,
    pub relations: Vec<String>,
    pub presentation_level_only: bool,
    pub tower: Option<TowerEnvelope>,
}

impl Problem {
    pub fn max_stages(&self) -> usize {
        self.spec.budgets.max_stages.unwrap_or(self.spec.truncation)
    }

    fn certification(&self, headroom_used: Option<usize>) -> Certification {
        Certification {
            truncation: self.spec.truncation,
            headroom: self.spec.headroom,
            headroom_used,
            max_headroom: self.spec.budgets.max_headroom,
            validity_margin: self.spec.budgets.validity_margin,
            factorial_budget: self.spec.budgets.factorial,
            max_stages: self.max_stages(),
        }
    }

    /// Builds `U` with a certified headroom.
    pub fn build_envelope(&self) -> Result<Built, CliError> {
        let s = &self.space;
        let n = self.spec.truncation;
        let h = self.spec.headroom;
        match &self.construction {
            Construction::Direct(spec) => {
                let rels = relations_from_bracket(s, spec, n)?;
                let pres = filtered_ideal_certified(s, &rels, n, h, self.spec.budgets.max_headroom.max(h))?;
                Ok(Built {
                    headroom_used: pres.headroom(),
                    relations: rels.render(s.labels()),
                    presentation_level_only: rels.presentation_level_only,
                    envelope: Envelope::new(pres)?,
                    tower: None,
                })
            }
            Construction::Tower(spec) => {
                let rule = builtin_rule(s, spec, n, h)?;
                let tower = tower_envelope(s, rule.as_ref(), n, h, self.max_stages())?;
                let pres = tower.presentation.clone();
                Ok(Built {
                    headroom_used: pres.headroom(),
                    relations: pres.relations().render(s.labels()),
                    presentation_level_only: false,
                    envelope: Envelope::new(pres)?,
                    tower: Some(tower),
                })
            }
            Construction::PrimitiveEnvelope => Ok(Built {
                envelope: kharchenko_fixture(s, n)?,
                headroom_used: 0,
                relations: Vec::new(),
                presentation_level_only: false,
                tower: None,
            }),
        }
    }

    /// `F_N` at two headrooms, for the stabilization criterion.
    pub fn headroom_agrees(&self, low: usize, high: usize) -> Result<bool, CliError> {
        let s = &self.space;
        let n = self.spec.truncation;
        let spec = match &self.construction {
            Construction::Direct(spec) | Construction::Tower(spec) => spec.clone(),
            Construction::PrimitiveEnvelope => return Ok(true),
        };
        let rels = relations_from_bracket(s, &spec, n)?;
        let a = filtered_ideal(s, &rels, n, low)?;
        let b = filtered_ideal(s, &rels, n, high)?;
        Ok(a.stable() && b.stable() && a.ideal() == b.ideal())
    }
}

fn witnesses(ws: &[Witness]) -> Value {
    Value::Array(
        ws.iter()
            .map(|w| json!({"check": w.check, "degree": w.degree, "element": w.element}))
            .collect(),
    )
}

fn rank_value(outcome: &RankOutcome) -> (Option<usize>, bool) {
    match outcome {
        RankOutcome::Certified { rank, .. } => (Some(*rank), true),
        RankOutcome::Exceeded { .. } => (None, false),
    }
}

/// Runs one subcommand. `qybe` takes the unchecked spec since the check is
/// its purpose.
pub fn run(command: Command, spec: &ProblemSpec) -> Result<Report, CliError> {
    if command == Command::Qybe {
        let space = spec.unchecked_space()?;
        if let Some(w) = space.qybe_defect() {
            return Err(CliError::Qybe(w.render(space.labels())));
        }
        let rank = space.braiding().rank();
        let d2 = spec.dim * spec.dim;
        if rank != d2 {
            return Err(CliError::Core(format!(
                "braiding is not invertible: rank {rank} < {d2}"
            )));
        }
        let problem = spec.build()?;
        return Ok(Report {
            command: command.name().into(),
            spec: spec.clone(),
            certification: problem.certification(None),
            result: json!({"qybe": true, "invertible": true, "field": spec.field, "dim": spec.dim}),
        });
    }
    let problem = spec.build()?;
    let s = &problem.space;
    let n = spec.truncation;
    let margin = spec.budgets.validity_margin;
    let mut headroom_used = None;
    let result = match command {
        Command::Qybe => unreachable!(),
        Command::Nichols => {
            let tower = nichols_dims_tower(s, n)?;
            let symmetrizer = nichols_dims_symmetrizer(s, n, spec.budgets.factorial)?;
            json!({"agree": tower == symmetrizer, "tower": tower, "symmetrizer": symmetrizer})
        }
        Command::Rank => {
            let (outcome, trace) = combinatorial_rank(s, n, problem.max_stages())?;
            let (rank, certified) = rank_value(&outcome);
            json!({
                "rank": rank,
                "certified": certified,
                "stage_dims": trace.stages.iter().map(|st| st.quotient_dims()).collect::<Vec<_>>(),
                "new_primitive_dims": trace.new_primitive_dims,
            })
        }
        Command::Primitives => {
            let free = free_presentation(s, n)?;
            let mut dims = vec![0, s.dim()];
            let mut elements: Vec<Vec<String>> = vec![Vec::new(), s.labels().to_vec()];
            for k in 2..=n {
                let basis = s.basis(k);
                let p = primitives_of_degree(&free, k)?;
                dims.push(p.dim());
                elements.push(
                    p.basis()
                        .iter()
                        .map(|v| TensorElement::from_vector(&basis, v).render(s.labels()))
                        .collect(),
                );
            }
            dims.truncate(n + 1);
            elements.truncate(n + 1);
            json!({"dims": dims, "elements": elements})
        }
        Command::Envelope => {
            let built = problem.build_envelope()?;
            headroom_used = Some(built.headroom_used);
            let pres = built.envelope.presentation();
            let words = built.envelope.normal_words();
            let mut normal: Vec<Vec<String>> = vec![Vec::new(); n + 1];
            for w in words {
                normal[w.degree()].push(w.render(s.labels()));
            }
            let tower = built.tower.as_ref().map(|t| {
                json!({
                    "stabilized_at": t.stabilized_at,
                    "injective": t.injective,
                    "stages": t.stages.iter().map(|st| json!({
                        "index": st.index,
                        "graded_dims": st.graded_dims,
                        "headroom": st.headroom,
                        "primitive_dim": st.primitive_dim,
                        "kernel_dim": st.kernel_dim,
                        "splits": st.splits,
                        "kernel_is_projection_kernel": st.kernel_is_projection_kernel,
                    })).collect::<Vec<_>>(),
                })
            });
            json!({
                "kind": spec.bracket.kind(),
                "relations": built.relations,
                "presentation_level_only": built.presentation_level_only,
                "stable": pres.stable(),
                "injective_on_v": built.envelope.is_injective_on_v(),
                "filtration_dims": pres.filtration_dims(),
                "graded_dims": pres.graded_dims(),
                "normal_words": normal,
                "tower": tower,
            })
        }
        Command::Pbw => {
            let built = problem.build_envelope()?;
            headroom_used = Some(built.headroom_used);
            let env = &built.envelope;
            let r = pbw_check(env)?;
            json!({
                "generators": env.generators().elements.iter().map(|g| env.render(g)).collect::<Vec<_>>(),
                "graded_dims": r.graded_dims,
                "nichols_dims": r.nichols_dims,
                "omega_exists": r.omega_exists,
                "pbw_type": r.pbw_type,
                "witnesses": witnesses(&r.witnesses),
            })
        }
        Command::PbwBasis => {
            let built = problem.build_envelope()?;
            headroom_used = Some(built.headroom_used);
            let basis = pbw_basis(&built.envelope)?;
            json!({"size": basis.len(), "basis": basis.render()})
        }
        Command::Corad => {
            let built = problem.build_envelope()?;
            headroom_used = Some(built.headroom_used);
            let env = &built.envelope;
            let data = coradical_filtration(env, margin)?;
            json!({
                "level_dims": data.levels.iter().map(|l| l.dim()).collect::<Vec<_>>(),
                "graded_dims": data.graded_dims(),
                "validity": data.validity,
                "primitive_dim": data.primitives.elements.len(),
                "primitives": data.primitives.elements.iter().map(|p| env.render(p)).collect::<Vec<_>>(),
            })
        }
        Command::Cosym => {
            let built = problem.build_envelope()?;
            headroom_used = Some(built.headroom_used);
            let env = &built.envelope;
            let data = coradical_filtration(env, margin)?;
            let check = cosymmetric_check(env, &data)?;
            let kha = khacosym_consistency(s, n, margin)?;
            json!({
                "cosymmetric": check.holds,
                "witnesses": witnesses(check.witness.as_slice()),
                "khacosym": {
                    "rank": kha.rank,
                    "stages": kha.stages.iter().map(|st| json!({
                        "stage": st.stage,
                        "cosymmetric": st.cosymmetric,
                        "implied_rank_bound": st.implied_rank_bound,
                    })).collect::<Vec<_>>(),
                },
            })
        }
        Command::Crosscheck => {
            let built = problem.build_envelope()?;
            headroom_used = Some(built.headroom_used);
            let r = teopbw_crosscheck(&built.envelope, margin)?;
            json!({
                "pbw_type": r.pbw_type,
                "strictly_generated": r.strictly_generated,
                "cosymmetric": r.cosymmetric,
                "lifting_ok": r.lifting_ok,
                "omega_exists": r.omega_exists,
                "graded_dims": r.graded_dims,
                "nichols_dims": r.nichols_dims,
                "witnesses": witnesses(&r.witnesses),
            })
        }
    };
    Ok(Report {
        command: command.name().into(),
        spec: spec.clone(),
        certification: problem.certification(headroom_used),
        result,
    })
}
