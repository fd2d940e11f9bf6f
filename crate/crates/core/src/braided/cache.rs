use std::sync::OnceLock;

use super::operator::GradedOperator;
use super::space::BraidedSpace;

/// Lazily built `Δ_{p,q}` and `c_T^{n,m}` matrices up to a fixed total
/// degree, shared by the routines that apply them repeatedly.
#[derive(Debug)]
pub struct OperatorCache {
    space: BraidedSpace,
    max_degree: usize,
    deltas: Vec<Vec<OnceLock<GradedOperator>>>,
    crossings: Vec<Vec<OnceLock<GradedOperator>>>,
}

impl OperatorCache {
    pub fn new(space: &BraidedSpace, max_degree: usize) -> Self {
        let grid = || {
            (0..=max_degree)
                .map(|n| (0..=n).map(|_| OnceLock::new()).collect())
                .collect()
        };
        OperatorCache {
            space: space.clone(),
            max_degree,
            deltas: grid(),
            crossings: grid(),
        }
    }

    pub fn space(&self) -> &BraidedSpace {
        &self.space
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// `Δ_{p,q}`; panics beyond the cache's degree.
    pub fn delta(&self, p: usize, q: usize) -> &GradedOperator {
        self.deltas[p + q][p].get_or_init(|| self.space.delta_component(p, q))
    }

    /// `c_T^{n,m}`; panics beyond the cache's degree.
    pub fn crossing(&self, n: usize, m: usize) -> &GradedOperator {
        self.crossings[n + m][n].get_or_init(|| self.space.ct_component(n, m))
    }
}
