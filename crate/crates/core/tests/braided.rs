use std::collections::HashMap;

use braidkit_core::braided::{BraidedSpace, GradedOperator, Permutation, Word};
use braidkit_core::linalg::{Field, Scalar};
use proptest::prelude::*;

mod common;
use common::{corpus, max_degree};

/// Elements of `T ⊗ T`, keyed by pairs of words.
type Pair = HashMap<(Word, Word), Scalar>;

fn add(acc: &mut Pair, key: (Word, Word), c: Scalar) {
    let e = acc.entry(key.clone()).or_insert_with(|| c.field().zero());
    *e += &c;
    if e.is_zero() {
        acc.remove(&key);
    }
}

/// `c_T(b ⊗ x)` for a word `b` and a letter `x`, read straight off the
/// braiding matrix: the letter crosses `b` from the right, one strand at a
/// time.
fn cross_letter(s: &BraidedSpace, b: &Word, x: u8) -> HashMap<Word, Scalar> {
    let d = s.dim();
    let field = s.field();
    let mut current: HashMap<Word, Scalar> = HashMap::new();
    current.insert(b.concat(&Word(vec![x])), field.one());
    for pos in (0..b.degree()).rev() {
        let mut next: HashMap<Word, Scalar> = HashMap::new();
        for (w, c) in current {
            let col = w.0[pos] as usize * d + w.0[pos + 1] as usize;
            for row in 0..d * d {
                let v = s.braiding().get(row, col);
                if v.is_zero() {
                    continue;
                }
                let mut u = w.clone();
                u.0[pos] = (row / d) as u8;
                u.0[pos + 1] = (row % d) as u8;
                let e = next.entry(u.clone()).or_insert_with(|| field.zero());
                *e += &(&c * &v);
                if e.is_zero() {
                    next.remove(&u);
                }
            }
        }
        current = next;
    }
    current
}

/// `Δ(w)` built as the algebra map into `T ⊗_c T` with `Δ(x) = x⊗1 + 1⊗x`.
fn recursive_delta(s: &BraidedSpace, w: &Word) -> Pair {
    let field = s.field();
    let mut acc: Pair = HashMap::new();
    acc.insert((Word::empty(), Word::empty()), field.one());
    for &x in w.letters() {
        let mut next: Pair = HashMap::new();
        for ((a, b), c) in acc {
            // (a⊗b)(x⊗1) = a·c_T(b⊗x) with the letter landing in front.
            for (u, k) in cross_letter(s, &b, x) {
                let (head, tail) = u.split_at(1);
                add(&mut next, (a.concat(&head), tail), &c * &k);
            }
            // (a⊗b)(1⊗x) = a ⊗ bx.
            add(&mut next, (a.clone(), b.concat(&Word(vec![x]))), c.clone());
        }
        acc = next;
    }
    acc
}

#[test]
fn shuffle_delta_matches_recursive_algebra_map() {
    for (name, s) in corpus() {
        for n in 0..=max_degree(&s).min(5) {
            for w in s.basis(n).words() {
                let oracle = recursive_delta(&s, w);
                for p in 0..=n {
                    let expected: HashMap<Word, Scalar> = oracle
                        .iter()
                        .filter(|((a, _), _)| a.degree() == p)
                        .map(|((a, b), c)| (a.concat(b), c.clone()))
                        .collect();
                    assert_eq!(s.delta_word(w, p), expected, "{name}: Δ_{{{p},{}}}({w:?})", n - p);
                }
            }
        }
    }
}

#[test]
fn braid_relations_up_to_degree_five() {
    for (name, s) in corpus() {
        for n in 3..=5 {
            let sig: Vec<GradedOperator> = (1..n).map(|i| s.sigma(i, n).unwrap()).collect();
            for i in 0..n - 1 {
                for j in 0..n - 1 {
                    let ij = sig[i].compose(&sig[j]).unwrap();
                    if i.abs_diff(j) >= 2 {
                        assert_eq!(ij, sig[j].compose(&sig[i]).unwrap(), "{name} n={n}");
                    }
                    if j == i + 1 {
                        let left = ij.compose(&sig[i]).unwrap();
                        let right = sig[j].compose(&sig[i]).unwrap().compose(&sig[j]).unwrap();
                        assert_eq!(left, right, "{name} n={n} i={i}");
                    }
                }
            }
        }
    }
}

#[test]
fn braid_lift_is_reduced_word_independent() {
    for (name, s) in corpus() {
        let n_max = if s.dim() == 2 { 5 } else { 4 };
        for n in 2..=n_max {
            for w in Permutation::all(n) {
                let words = w.reduced_words();
                let reference = s.braid_lift(&w);
                assert_eq!(reference, s.braid_lift_along(n, &words[0]));
                let last = words.last().unwrap();
                assert_eq!(reference, s.braid_lift_along(n, last), "{name} {w:?}");
            }
        }
    }
}

#[test]
fn longest_element_of_s3_two_ways() {
    for (_, s) in corpus() {
        assert_eq!(s.braid_lift_along(3, &[1, 2, 1]), s.braid_lift_along(3, &[2, 1, 2]));
    }
}

#[test]
fn coassociativity_of_components() {
    for (name, s) in corpus() {
        let n_max = max_degree(&s);
        let id = |k: usize| GradedOperator::identity(s.field(), vec![k], s.dim().pow(k as u32));
        for n in 0..=n_max {
            for p in 0..=n {
                for q in 0..=n - p {
                    let r = n - p - q;
                    let left = s
                        .delta_component(p, q)
                        .tensor(&id(r))
                        .compose(&s.delta_component(p + q, r))
                        .unwrap();
                    let right = id(p)
                        .tensor(&s.delta_component(q, r))
                        .compose(&s.delta_component(p, q + r))
                        .unwrap();
                    assert_eq!(left.columns(), right.columns(), "{name} ({p},{q},{r})");
                }
            }
        }
    }
}

/// `Δ(uv) = (m⊗m)(Id⊗c_T⊗Id)(Δ(u)⊗Δ(v))` on monomials of total degree ≤ 4.
#[test]
fn bialgebra_compatibility_up_to_degree_four() {
    for (name, s) in corpus() {
        let field = s.field();
        for n in 0..=4 {
            for a in 0..=n {
                let (left_basis, right_basis) = (s.basis(a), s.basis(n - a));
                for (u, v) in left_basis
                    .words()
                    .iter()
                    .flat_map(|u| right_basis.words().iter().map(move |v| (u.clone(), v.clone())))
                {
                    let uv = u.concat(&v);
                    for p in 0..=n {
                        let mut rhs: HashMap<Word, Scalar> = HashMap::new();
                        for p1 in 0..=a.min(p) {
                            let p2 = p - p1;
                            if p2 > n - a {
                                continue;
                            }
                            let q1 = a - p1;
                            for (w1, c1) in s.delta_word(&u, p1) {
                                let (l1, r1) = w1.split_at(p1);
                                for (w2, c2) in s.delta_word(&v, p2) {
                                    let (l2, r2) = w2.split_at(p2);
                                    for (mid, c3) in s.ct_word(&r1.concat(&l2), q1) {
                                        let (m1, m2) = mid.split_at(p2);
                                        let key = l1.concat(&m1).concat(&m2).concat(&r2);
                                        let coef = &(&c1 * &c2) * &c3;
                                        let e = rhs.entry(key.clone()).or_insert_with(|| field.zero());
                                        *e += &coef;
                                        if e.is_zero() {
                                            rhs.remove(&key);
                                        }
                                    }
                                }
                            }
                        }
                        assert_eq!(s.delta_word(&uv, p), rhs, "{name}: {u:?}·{v:?} p={p}");
                    }
                }
            }
        }
    }
}

#[test]
fn symmetrizer_budget_is_enforced() {
    let s = BraidedSpace::flip(Field::Rationals, 2).unwrap();
    let err = s.quantum_symmetrizer(8, 7).unwrap_err();
    assert!(err.to_string().contains('7'));
}

#[test]
fn classical_symmetrizer_ranks() {
    // dim S^n(K²) = n + 1.
    let s = BraidedSpace::flip(Field::Rationals, 2).unwrap();
    let ranks: Vec<usize> = (0..=6).map(|n| s.quantum_symmetrizer(n, 7).unwrap().rank()).collect();
    assert_eq!(ranks, vec![1, 2, 3, 4, 5, 6, 7]);
}

fn arb_space() -> impl Strategy<Value = BraidedSpace> {
    (1usize..=3, proptest::collection::vec(-3i64..=3, 9)).prop_filter_map("nonzero q", |(d, qs)| {
        let field = Field::Rationals;
        let rows: Vec<Vec<Scalar>> = (0..d)
            .map(|i| (0..d).map(|j| field.from_i64(qs[i * 3 + j])).collect())
            .collect();
        BraidedSpace::diagonal(field, &rows).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn diagonal_braidings_satisfy_qybe(s in arb_space()) {
        prop_assert!(s.check_qybe());
    }

    #[test]
    fn lift_is_multiplicative_on_length_additive_products(
        s in arb_space(),
        a in proptest::sample::select(Permutation::all(4)),
        b in proptest::sample::select(Permutation::all(4)),
    ) {
        let ab = a.compose(&b);
        if ab.length() == a.length() + b.length() {
            prop_assert_eq!(s.braid_lift(&ab), s.braid_lift(&a).compose(&s.braid_lift(&b)).unwrap());
        }
    }

    #[test]
    fn symmetrizer_kills_kernel_of_last_delta(s in arb_space(), n in 0usize..=4) {
        // 𝔖_n factors through Δ_{n−1,1}, so its kernel contains ker Δ_{n−1,1}.
        let sym = s.quantum_symmetrizer(n, 7).unwrap();
        if n >= 1 {
            let d = s.delta_component(n - 1, 1);
            for v in d.kernel().basis() {
                prop_assert!(sym.apply(v).is_zero());
            }
        }
    }
}
