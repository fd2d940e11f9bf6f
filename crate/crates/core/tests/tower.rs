use braidkit_core::braided::{lex_rank, Word};
use braidkit_core::linalg::{Field, SparseVec, Subspace};
use braidkit_core::tower::{
    combinatorial_rank, free_presentation, ideal_closure, nichols_dims_symmetrizer, nichols_dims_tower,
    primitives_of_degree, tower_step, GradedPresentation, Property, RankOutcome, TowerError,
};

mod common;
use common::*;

fn word_vec(d: usize, terms: &[(&[u8], i64)]) -> SparseVec {
    let q = Field::Rationals;
    SparseVec::from_pairs(
        terms
            .iter()
            .map(|(w, c)| (lex_rank(&Word(w.to_vec()), d), q.from_i64(*c)))
            .collect(),
    )
}

fn certified(outcome: RankOutcome) -> usize {
    match outcome {
        RankOutcome::Certified { rank, .. } => rank,
        RankOutcome::Exceeded { .. } => panic!("tower did not stabilize"),
    }
}

#[test]
fn free_presentation_examples() {
    for (_, s) in corpus() {
        let d = s.dim();
        let p = free_presentation(&s, 4).unwrap();
        assert_eq!(p.quotient_dims(), (0..=4).map(|n| d.pow(n)).collect::<Vec<_>>());
    }
    assert_eq!(free_presentation(&flip(2), 2).unwrap().quotient_dims()[2], 4);
    let k = free_presentation(&kharchenko(), 6).unwrap();
    assert_eq!(k.quotient_dims(), vec![1, 2, 4, 8, 16, 32, 64]);
}

#[test]
fn degree_two_primitives() {
    let q = Field::Rationals;
    for d in 1..=3 {
        let s = flip(d);
        let p = free_presentation(&s, 2).unwrap();
        assert_eq!(primitives_of_degree(&p, 2).unwrap().dim(), d * (d - 1) / 2);
    }

    let p = free_presentation(&kharchenko(), 2).unwrap();
    let expected = Subspace::span(q, 4, vec![word_vec(2, &[(&[0, 0], 1)]), word_vec(2, &[(&[1, 1], 1)])]);
    assert_eq!(primitives_of_degree(&p, 2).unwrap(), expected);

    let p = free_presentation(&stumbo(), 2).unwrap();
    let expected = Subspace::span(q, 4, vec![word_vec(2, &[(&[1, 0], 1), (&[0, 1], -1)])]);
    assert_eq!(primitives_of_degree(&p, 2).unwrap(), expected);
}

#[test]
fn closure_examples() {
    let q = Field::Rationals;
    let s = flip(2);
    let gens = vec![
        Subspace::zero(q, 1),
        Subspace::zero(q, 2),
        Subspace::span(q, 4, vec![word_vec(2, &[(&[0, 1], 1)])]),
    ];
    let ideal = ideal_closure(&gens, &s, 3);
    assert_eq!(ideal[3].dim(), 4);
    let padded = Subspace::span(
        q,
        8,
        vec![
            word_vec(2, &[(&[0, 1, 0], 1)]),
            word_vec(2, &[(&[0, 1, 1], 1)]),
            word_vec(2, &[(&[0, 0, 1], 1)]),
            word_vec(2, &[(&[1, 0, 1], 1)]),
        ],
    );
    assert_eq!(ideal[3], padded);

    let all = vec![Subspace::zero(q, 1), Subspace::zero(q, 2), Subspace::full(q, 4)];
    let ideal = ideal_closure(&all, &s, 4);
    for (m, component) in ideal.iter().enumerate().skip(2) {
        assert_eq!(component, &Subspace::full(q, 1 << m));
    }
}

#[test]
fn classical_tower_stops_after_one_step() {
    let s = flip(2);
    let s0 = free_presentation(&s, 5).unwrap();
    let s1 = tower_step(&s0).unwrap();
    assert_eq!(s1.ideal()[2].dim(), 1);
    let s2 = tower_step(&s1).unwrap();
    assert_eq!(s1, s2);
    assert_eq!(s1.quotient_dims(), vec![1, 2, 3, 4, 5, 6]);
}

#[test]
fn kharchenko_tower_has_rank_two() {
    let s = kharchenko();
    let s0 = free_presentation(&s, 6).unwrap();
    let s1 = tower_step(&s0).unwrap();
    let s2 = tower_step(&s1).unwrap();
    let s3 = tower_step(&s2).unwrap();
    assert_ne!(s1, s2);
    assert_eq!(s2, s3);
    let (outcome, trace) = combinatorial_rank(&s, 6, 6).unwrap();
    assert_eq!(certified(outcome), 2);
    assert_eq!(trace.stabilized_at, Some(2));
    assert_eq!(trace.stages.len(), 3);
    assert_eq!(outcome.to_string(), "2 (6-certified)");
}

#[test]
fn ranks_of_corpus_examples() {
    assert_eq!(certified(combinatorial_rank(&flip(2), 6, 6).unwrap().0), 1);
    assert_eq!(certified(combinatorial_rank(&flip(3), 5, 5).unwrap().0), 1);
    assert_eq!(certified(combinatorial_rank(&stumbo(), 6, 6).unwrap().0), 1);
}

#[test]
fn closed_generators_are_a_fixed_point() {
    let s = stumbo();
    let (_, trace) = combinatorial_rank(&s, 5, 5).unwrap();
    let stable = trace.stages.last().unwrap();
    assert_eq!(&tower_step(stable).unwrap(), stable);
}

#[test]
fn nichols_dims_examples() {
    assert_eq!(nichols_dims_tower(&stumbo(), 6).unwrap(), vec![1, 2, 3, 4, 5, 6, 7]);
    assert_eq!(nichols_dims_tower(&flip(3), 6).unwrap(), vec![1, 3, 6, 10, 15, 21, 28]);
    assert_eq!(nichols_dims_tower(&flip_mod(2, 1), 5).unwrap(), vec![1, 1, 0, 0, 0, 0]);
    assert_eq!(
        nichols_dims_symmetrizer(&flip(2), 6, 7).unwrap(),
        vec![1, 2, 3, 4, 5, 6, 7]
    );
    assert_eq!(nichols_dims_symmetrizer(&kharchenko(), 2, 7).unwrap()[2], 2);
    for (_, s) in corpus() {
        assert_eq!(nichols_dims_symmetrizer(&s, 1, 7).unwrap()[1], s.dim());
    }
}

/// The tower and the symmetrizer agree on every corpus braiding.
#[test]
fn tower_matches_symmetrizer() {
    for (name, s) in corpus() {
        let tower = nichols_dims_tower(&s, 6).unwrap();
        let sym = nichols_dims_symmetrizer(&s, 6, 7).unwrap();
        assert_eq!(tower, sym, "{name}");
    }
}

#[test]
fn tower_invariants() {
    for (name, s) in corpus() {
        let n = max_degree(&s);
        let (outcome, trace) = combinatorial_rank(&s, n, n).unwrap();
        certified(outcome);
        for pair in trace.stages.windows(2) {
            let (a, b) = (pair[0].quotient_dims(), pair[1].quotient_dims());
            assert!(a.iter().zip(&b).all(|(x, y)| y <= x), "{name}: dims must not grow");
            for (i, j) in pair[0].ideal().iter().zip(pair[1].ideal()) {
                assert!(i.is_subspace_of(j));
            }
            assert_ne!(pair[0], pair[1]);
        }
        for stage in &trace.stages {
            let f = stage.verified();
            assert!(f.ideal_ok && f.coideal_ok && f.braiding_ok);
        }
        let stable = trace.stages.last().unwrap();
        for k in 2..=n {
            assert_eq!(
                &primitives_of_degree(stable, k).unwrap(),
                &stable.ideal()[k],
                "{name} degree {k}"
            );
        }
        assert!(trace.new_primitive_dims.last().unwrap().iter().all(|&x| x == 0));
    }
}

#[test]
fn non_coideal_is_rejected() {
    let q = Field::Rationals;
    let s = flip(2);
    let gens = vec![
        Subspace::zero(q, 1),
        Subspace::zero(q, 2),
        Subspace::span(q, 4, vec![word_vec(2, &[(&[0, 1], 1)])]),
    ];
    let ideal = ideal_closure(&gens, &s, 3);
    match GradedPresentation::new(s, 3, ideal) {
        Err(TowerError::Verification { property, degree, .. }) => {
            assert_eq!(property, Property::Coideal);
            assert!(degree.starts_with('2'));
        }
        other => panic!("expected a coideal failure, got {other:?}"),
    }
}

#[test]
fn non_ideal_is_rejected() {
    let q = Field::Rationals;
    let s = flip(2);
    let mut ideal: Vec<Subspace> = (0..=3).map(|n| Subspace::zero(q, 1 << n)).collect();
    ideal[2] = Subspace::span(q, 4, vec![word_vec(2, &[(&[0, 1], 1), (&[1, 0], -1)])]);
    assert!(matches!(
        GradedPresentation::new(s, 3, ideal),
        Err(TowerError::Verification {
            property: Property::Ideal,
            ..
        })
    ));
}

#[test]
fn exceeded_budget_is_reported_with_trace() {
    let (outcome, trace) = combinatorial_rank(&kharchenko(), 6, 0).unwrap();
    assert_eq!(outcome, RankOutcome::Exceeded { max_steps: 0 });
    assert_eq!(trace.stages.len(), 2);
    assert_eq!(trace.stabilized_at, None);
}
