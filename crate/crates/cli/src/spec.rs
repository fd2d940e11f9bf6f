//! The JSON problem document and its translation into core objects.

use std::collections::BTreeMap;

use braidkit_core::braided::{default_labels, BraidedSpace, TensorElement, Word, DEFAULT_FACTORIAL_BUDGET};
use braidkit_core::enveloping::{
    BracketSpec, LieBracket, Relation, DEFAULT_HEADROOM, DEFAULT_MAX_HEADROOM, DEFAULT_VALIDITY_MARGIN,
};
use braidkit_core::linalg::{Field, Matrix, Scalar, SparseVec};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// A vector or tensor written as `label or word → exact literal`.
pub type Terms = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub name: String,
    /// `"Q"` or `"GF(p)"`.
    pub field: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub braiding: BraidingDoc,
    #[serde(default)]
    pub bracket: BracketDoc,
    pub truncation: usize,
    #[serde(default = "default_headroom")]
    pub headroom: usize,
    #[serde(default)]
    pub budgets: Budgets,
}

fn default_headroom() -> usize {
    DEFAULT_HEADROOM
}

/// `diagonal[i][j] = q_ij` with `c(x_i⊗x_j) = q_ij x_j⊗x_i`; `matrix` is the
/// `d² × d²` matrix whose column `i·d + j` is `c(x_i⊗x_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BraidingDoc {
    Diagonal(Vec<Vec<String>>),
    Matrix(Vec<Vec<String>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Budgets {
    /// Largest headroom tried before instability is an error.
    #[serde(default = "default_max_headroom")]
    pub max_headroom: usize,
    /// Largest degree at which a quantum symmetrizer is expanded.
    #[serde(default = "default_factorial")]
    pub factorial: usize,
    /// Tower steps allowed; the truncation when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_stages: Option<usize>,
    /// Coradical levels are trusted up to `truncation − validity_margin`.
    #[serde(default = "default_margin")]
    pub validity_margin: usize,
}

fn default_max_headroom() -> usize {
    DEFAULT_MAX_HEADROOM
}

fn default_factorial() -> usize {
    DEFAULT_FACTORIAL_BUDGET
}

fn default_margin() -> usize {
    DEFAULT_VALIDITY_MARGIN
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            max_headroom: DEFAULT_MAX_HEADROOM,
            factorial: DEFAULT_FACTORIAL_BUDGET,
            max_stages: None,
            validity_margin: DEFAULT_VALIDITY_MARGIN,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    /// Two labels `[a, b]`.
    pub pair: [String; 2],
    /// `[a, b]` as a combination of labels.
    pub value: Terms,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaEntry {
    /// A homogeneous primitive of `T(V, c)`, keyed by words.
    pub element: Terms,
    pub value: Terms,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BracketDoc {
    #[default]
    Trivial,
    Rank1Map {
        beta: Vec<BetaEntry>,
    },
    LieFlip {
        #[serde(default)]
        brackets: Vec<BracketEntry>,
    },
    RestrictedFlip {
        #[serde(default)]
        brackets: Vec<BracketEntry>,
        /// `x^[p]` per label; missing labels map to zero.
        #[serde(default)]
        p_map: BTreeMap<String, Terms>,
    },
    Relations {
        relations: Vec<Terms>,
    },
    /// The tower route driven by the built-in rule of `rule`.
    CustomTower {
        rule: Box<BracketDoc>,
    },
    /// `T(V, c)` generated by its own primitive elements.
    PrimitiveEnvelope,
}

/// How the enveloping algebra is built.
#[derive(Clone, Debug)]
pub enum Construction {
    Direct(BracketSpec),
    Tower(BracketSpec),
    PrimitiveEnvelope,
}

/// A validated problem.
#[derive(Clone, Debug)]
pub struct Problem {
    pub spec: ProblemSpec,
    pub space: BraidedSpace,
    pub construction: Construction,
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))
    }

    pub fn field_value(&self) -> Result<Field, CliError> {
        self.field
            .parse()
            .map_err(|e| CliError::Schema(format!("field `{}`: {e}", self.field)))
    }

    pub fn labels(&self) -> Vec<String> {
        self.labels.clone().unwrap_or_else(|| default_labels(self.dim))
    }

    /// The braiding matrix, before the braid relation is checked.
    pub fn braiding_matrix(&self) -> Result<Matrix, CliError> {
        let field = self.field_value()?;
        let d = self.dim;
        let parse_grid = |grid: &[Vec<String>], size: usize, what: &str| -> Result<Vec<Vec<Scalar>>, CliError> {
            if grid.len() != size || grid.iter().any(|r| r.len() != size) {
                return Err(CliError::Schema(format!("{what} braiding must be {size} × {size}")));
            }
            grid.iter()
                .map(|row| row.iter().map(|v| scalar(field, v)).collect())
                .collect()
        };
        match &self.braiding {
            BraidingDoc::Diagonal(grid) => {
                let q = parse_grid(grid, d, "diagonal")?;
                let columns: Vec<SparseVec> = (0..d * d)
                    .map(|col| {
                        let (i, j) = (col / d, col % d);
                        SparseVec::from_pairs(
                            vec![(j * d + i, q[i][j].clone())]
                                .into_iter()
                                .filter(|(_, c)| !c.is_zero())
                                .collect(),
                        )
                    })
                    .collect();
                Ok(Matrix::from_columns(field, d * d, &columns))
            }
            BraidingDoc::Matrix(grid) => {
                let m = parse_grid(grid, d * d, "matrix")?;
                Ok(Matrix::from_dense(field, &m)?)
            }
        }
    }

    /// The braided space without the braid-relation check.
    pub fn unchecked_space(&self) -> Result<BraidedSpace, CliError> {
        self.check_shape()?;
        let space = BraidedSpace::unchecked(self.field_value()?, self.dim, self.braiding_matrix()?)?;
        Ok(space.with_labels(self.labels())?)
    }

    fn check_shape(&self) -> Result<(), CliError> {
        if self.dim == 0 {
            return Err(CliError::Schema("dim must be positive".into()));
        }
        let labels = self.labels();
        if labels.len() != self.dim {
            return Err(CliError::Schema(format!(
                "{} labels for dimension {}",
                labels.len(),
                self.dim
            )));
        }
        for (k, l) in labels.iter().enumerate() {
            if l.is_empty() || l.contains(char::is_whitespace) || labels[..k].contains(l) {
                return Err(CliError::Schema(format!(
                    "label `{l}` must be nonempty, unique and without spaces"
                )));
            }
        }
        if self.truncation == 0 {
            return Err(CliError::Schema("truncation must be at least 1".into()));
        }
        Ok(())
    }

    pub fn build(&self) -> Result<Problem, CliError> {
        self.check_shape()?;
        let field = self.field_value()?;
        let space = BraidedSpace::new(field, self.dim, self.braiding_matrix()?)?.with_labels(self.labels())?;
        let construction = match &self.bracket {
            BracketDoc::PrimitiveEnvelope => Construction::PrimitiveEnvelope,
            BracketDoc::CustomTower { rule } => match rule.as_ref() {
                BracketDoc::CustomTower { .. } | BracketDoc::PrimitiveEnvelope => {
                    return Err(CliError::Schema("custom_tower needs a built-in rule".into()))
                }
                inner => Construction::Tower(bracket_spec(&space, inner)?),
            },
            other => Construction::Direct(bracket_spec(&space, other)?),
        };
        Ok(Problem {
            spec: self.clone(),
            space,
            construction,
        })
    }
}

fn scalar(field: Field, literal: &str) -> Result<Scalar, CliError> {
    field
        .parse(literal)
        .map_err(|e| CliError::Schema(format!("scalar literal: {e}")))
}

fn letter(space: &BraidedSpace, label: &str) -> Result<usize, CliError> {
    space
        .labels()
        .iter()
        .position(|l| l == label)
        .ok_or_else(|| CliError::Schema(format!("unknown label `{label}`")))
}

fn word(space: &BraidedSpace, text: &str) -> Result<Word, CliError> {
    let letters = text
        .split_whitespace()
        .map(|l| letter(space, l).map(|i| i as u8))
        .collect::<Result<Vec<_>, _>>()?;
    if letters.is_empty() {
        return Err(CliError::Schema("empty words are not allowed in relations".into()));
    }
    Ok(Word(letters))
}

fn vector(space: &BraidedSpace, terms: &Terms) -> Result<SparseVec, CliError> {
    let mut pairs = Vec::new();
    for (label, c) in terms {
        let c = scalar(space.field(), c)?;
        if !c.is_zero() {
            pairs.push((letter(space, label)?, c));
        }
    }
    Ok(SparseVec::from_pairs(pairs))
}

fn word_terms(space: &BraidedSpace, terms: &Terms) -> Result<Vec<(Word, Scalar)>, CliError> {
    terms
        .iter()
        .map(|(w, c)| Ok((word(space, w)?, scalar(space.field(), c)?)))
        .filter(|r: &Result<(Word, Scalar), CliError>| r.as_ref().map_or(true, |(_, c)| !c.is_zero()))
        .collect()
}

fn lie_bracket(space: &BraidedSpace, entries: &[BracketEntry]) -> Result<LieBracket, CliError> {
    let table = entries
        .iter()
        .map(|e| {
            Ok((
                letter(space, &e.pair[0])?,
                letter(space, &e.pair[1])?,
                vector(space, &e.value)?,
            ))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(LieBracket::new(space.field(), space.dim(), &table)?)
}

fn bracket_spec(space: &BraidedSpace, doc: &BracketDoc) -> Result<BracketSpec, CliError> {
    Ok(match doc {
        BracketDoc::Trivial => BracketSpec::Trivial,
        BracketDoc::Rank1Map { beta } => BracketSpec::Rank1Map(
            beta.iter()
                .map(|entry| {
                    let terms = word_terms(space, &entry.element)?;
                    let degree = terms.first().map(|(w, _)| w.degree()).unwrap_or(0);
                    let element = TensorElement::new(degree, terms)
                        .filter(|e| !e.is_zero())
                        .ok_or_else(|| CliError::Schema("rank1_map elements must be nonzero and homogeneous".into()))?;
                    Ok((element, vector(space, &entry.value)?))
                })
                .collect::<Result<_, CliError>>()?,
        ),
        BracketDoc::LieFlip { brackets } => BracketSpec::LieFlip(lie_bracket(space, brackets)?),
        BracketDoc::RestrictedFlip { brackets, p_map } => {
            for label in p_map.keys() {
                letter(space, label)?;
            }
            let pmap = space
                .labels()
                .iter()
                .map(|l| p_map.get(l).map_or(Ok(SparseVec::new()), |t| vector(space, t)))
                .collect::<Result<_, _>>()?;
            BracketSpec::RestrictedFlip {
                bracket: lie_bracket(space, brackets)?,
                pmap,
            }
        }
        BracketDoc::Relations { relations } => BracketSpec::Relations(
            relations
                .iter()
                .map(|r| Ok(Relation::from_terms(word_terms(space, r)?)?))
                .collect::<Result<_, CliError>>()?,
        ),
        BracketDoc::CustomTower { .. } | BracketDoc::PrimitiveEnvelope => {
            return Err(CliError::Schema(format!("`{}` cannot be nested", doc.kind())))
        }
    })
}

impl BracketDoc {
    pub fn kind(&self) -> &'static str {
        match self {
            BracketDoc::Trivial => "trivial",
            BracketDoc::Rank1Map { .. } => "rank1_map",
            BracketDoc::LieFlip { .. } => "lie_flip",
            BracketDoc::RestrictedFlip { .. } => "restricted_flip",
            BracketDoc::Relations { .. } => "relations",
            BracketDoc::CustomTower { .. } => "custom_tower",
            BracketDoc::PrimitiveEnvelope => "primitive_envelope",
        }
    }
}
