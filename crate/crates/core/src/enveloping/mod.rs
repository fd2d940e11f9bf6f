//! Universal enveloping algebras of braided Lie algebras as filtered
//! quotients `U = T(V, c)/J`, and the decisions made about them: PBW type,
//! PBW bases, coradical filtration, linearization map, cosymmetry, strict
//! generation and the lifting property.
//!
//! `J ∩ T_(N)` is computed inside a closure of top degree `N + H` and
//! certified by comparing with `N + H + 1`.

mod analysis;
mod coradical;
mod filtered;
mod pbw;
mod relations;
mod tower;

pub use analysis::{CheckResult, Envelope, Generators, Witness};
pub use coradical::{
    coradical_filtration, cosymmetric_check, lifting_check, linearization_map, strictly_generated_check, CoradicalData,
    Linearization, DEFAULT_VALIDITY_MARGIN,
};
pub use filtered::{filtered_ideal, filtered_ideal_certified, FilteredPresentation, FilteredWords};
pub use pbw::{pbw_basis, pbw_check, teopbw_crosscheck, theta_factors_check, PBWReport, PbwBasis};
pub use relations::{relations_from_bracket, BracketSpec, LieBracket, Relation, RelationSet};
pub use tower::{
    builtin_rule, khacosym_consistency, kharchenko_fixture, tower_envelope, BracketRule, KhaCosymReport, KhaCosymStage,
    LieRule, NormalFormRule, RankOneRule, Stage, StageReport, TowerEnvelope, TrivialRule,
};

use thiserror::Error;

use crate::braided::BraidError;
use crate::linalg::LinalgError;
use crate::tower::TowerError;

/// Headroom used when none is configured.
pub const DEFAULT_HEADROOM: usize = 2;
/// Largest headroom tried before instability becomes an error.
pub const DEFAULT_MAX_HEADROOM: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnvError {
    #[error("invalid bracket: {0}")]
    Bracket(String),
    #[error("invalid relation: {0}")]
    Relation(String),
    #[error("F_N changed between headroom {headroom} and {next}; rerun with a larger headroom limit")]
    Unstable { headroom: usize, next: usize },
    #[error("the presentation is not stable at headroom {0}; rerun with a larger headroom")]
    NotStable(usize),
    #[error("the relations do not generate a coideal: Δ does not preserve J at {0}")]
    NotCoideal(String),
    #[error("the braiding does not restrict to the primitives: {0}")]
    PrimitiveBraiding(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("level {level} lies beyond the validity bound {validity}")]
    Validity { level: usize, validity: usize },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
