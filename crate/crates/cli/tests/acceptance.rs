//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Built with `harness = false` so the lines are always printed.

use std::collections::{BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use braidkit::corpus;
use braidkit::spec::Construction;
use braidkit::Problem;
use braidkit_core::braided::{BraidedSpace, GradedOperator, Permutation, Word, DEFAULT_FACTORIAL_BUDGET};
use braidkit_core::enveloping::{
    builtin_rule, khacosym_consistency, pbw_basis, teopbw_crosscheck, tower_envelope, BracketSpec, Envelope,
    TrivialRule, DEFAULT_VALIDITY_MARGIN,
};
use braidkit_core::linalg::{kernel, Field, Matrix, Scalar, Subspace};
use braidkit_core::tower::{combinatorial_rank, nichols_dims_symmetrizer, nichols_dims_tower, RankOutcome};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn problem(name: &str) -> Problem {
    corpus::entry(name).unwrap().spec().unwrap().build().unwrap()
}

fn problems() -> Vec<(&'static str, Problem)> {
    corpus::names().into_iter().map(|n| (n, problem(n))).collect()
}

fn envelope(p: &Problem) -> Envelope {
    p.build_envelope().unwrap().envelope
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Nondecreasing words of length `n` in `d` letters, rendered with `labels`.
fn ordered_monomials(labels: &[&str], n: usize) -> BTreeSet<String> {
    fn go(labels: &[&str], n: usize, from: usize, prefix: &mut Vec<usize>, out: &mut BTreeSet<String>) {
        if prefix.len() == n {
            let w: Vec<&str> = prefix.iter().map(|&i| labels[i]).collect();
            out.insert(if w.is_empty() { "1".into() } else { w.join(" ") });
            return;
        }
        for i in from..labels.len() {
            prefix.push(i);
            go(labels, n, i, prefix, out);
            prefix.pop();
        }
    }
    let mut out = BTreeSet::new();
    go(labels, n, 0, &mut Vec::new(), &mut out);
    out
}

fn basis_sets(env: &Envelope) -> Vec<BTreeSet<String>> {
    pbw_basis(env)
        .unwrap()
        .render()
        .into_iter()
        .map(|d| d.into_iter().collect())
        .collect()
}

fn c1_oracle_agreement() -> Outcome {
    let mut cases = 0;
    for (name, p) in problems() {
        let n = p.spec.truncation;
        let tower = nichols_dims_tower(&p.space, n).map_err(|e| format!("{name}: {e}"))?;
        let sym =
            nichols_dims_symmetrizer(&p.space, n, DEFAULT_FACTORIAL_BUDGET).map_err(|e| format!("{name}: {e}"))?;
        ensure(tower == sym, || {
            format!("{name}: tower {tower:?} vs symmetrizer {sym:?}")
        })?;
        ensure(n == if p.space.dim() == 2 { 6 } else { 5 }, || {
            format!("{name}: truncation {n}")
        })?;
        cases += 1;
    }
    Ok(format!("{cases} braidings"))
}

fn c2_rank() -> Outcome {
    let (outcome, _) = combinatorial_rank(&problem("kharchenko").space, 6, 6).map_err(|e| e.to_string())?;
    ensure(outcome == RankOutcome::Certified { rank: 2, truncation: 6 }, || {
        format!("kharchenko: {outcome}")
    })?;
    for name in [
        "flip-d2-char0",
        "flip-d3-char0",
        "restricted-gf2-abelian",
        "restricted-gf3",
        "stumbo",
    ] {
        let p = problem(name);
        let n = p.spec.truncation;
        let (outcome, _) = combinatorial_rank(&p.space, n, n).map_err(|e| e.to_string())?;
        ensure(
            matches!(outcome, RankOutcome::Certified { rank, .. } if rank <= 1),
            || format!("{name}: {outcome}"),
        )?;
    }
    Ok("kharchenko rank 2 certified at N = 6; flip and stumbo rank <= 1".into())
}

fn c3_stumbo() -> Outcome {
    let env = envelope(&problem("stumbo"));
    let dims = env.presentation().graded_dims();
    ensure(dims == (1..=7).collect::<Vec<_>>(), || format!("graded dims {dims:?}"))?;
    let report = teopbw_crosscheck(&env, DEFAULT_VALIDITY_MARGIN).map_err(|e| e.to_string())?;
    ensure(report.pbw_type, || "pbw_check false".into())?;
    for (n, got) in basis_sets(&env).into_iter().enumerate() {
        let expected: BTreeSet<String> = ordered_monomials(&["x1", "x2"], n);
        ensure(got == expected, || format!("degree {n}: {got:?}"))?;
    }
    Ok("dims 1..7, PBW type, basis x1^a x2^b".into())
}

fn c4_sl2() -> Outcome {
    let env = envelope(&problem("sl2"));
    let dims = env.presentation().graded_dims();
    let expected: Vec<usize> = (0..=5).map(|n| binomial(n + 2, 2)).collect();
    ensure(dims == expected, || format!("graded dims {dims:?}"))?;
    for (n, got) in basis_sets(&env).into_iter().enumerate() {
        ensure(got == ordered_monomials(&["e", "h", "f"], n), || {
            format!("degree {n}: {got:?}")
        })?;
    }
    Ok(format!("dims {expected:?}, ordered monomials in e < h < f"))
}

fn c5_restricted() -> Outcome {
    let env = envelope(&problem("restricted-gf2-abelian"));
    let dims = env.presentation().graded_dims();
    ensure(dims == vec![1, 2, 1, 0, 0, 0, 0], || format!("GF(2) dims {dims:?}"))?;
    ensure(dims.iter().sum::<usize>() == 4, || "GF(2) total".into())?;
    for word in pbw_basis(&env).unwrap().per_degree.iter().flatten() {
        let mut counts = HashMap::new();
        for l in word.letters() {
            *counts.entry(*l).or_insert(0) += 1;
        }
        ensure(counts.values().all(|&c| c <= 1), || {
            format!("GF(2) basis word {word:?}")
        })?;
    }
    let env = envelope(&problem("restricted-gf3"));
    let dims = env.presentation().graded_dims();
    let expected: Vec<usize> = (0..=6usize)
        .map(|n| (0..=2usize).filter(|a| n >= *a && n - a <= 2).count())
        .collect();
    ensure(dims == expected, || format!("GF(3) dims {dims:?} vs {expected:?}"))?;
    Ok(format!(
        "GF(2) total 4 with dims (1, 2, 1, 0, ...), GF(3) dims {expected:?}"
    ))
}

fn c6_equivalence() -> Outcome {
    let mut summary = Vec::new();
    for (name, p) in problems() {
        let env = envelope(&p);
        let r = teopbw_crosscheck(&env, p.spec.budgets.validity_margin).map_err(|e| format!("{name}: {e}"))?;
        let verdicts = [Some(r.pbw_type), r.strictly_generated, r.cosymmetric, r.lifting_ok];
        let want = name != "kharchenko-envelope-fixture";
        ensure(verdicts.iter().all(|v| *v == Some(want)), || {
            format!("{name}: pbw, strict, cosym, lifting = {verdicts:?}")
        })?;
        summary.push(format!("{name}={want}"));
    }
    Ok(summary.join(" "))
}

fn c7_headroom() -> Outcome {
    for (name, p) in problems() {
        let agrees = p.headroom_agrees(2, 3).map_err(|e| format!("{name}: {e}"))?;
        ensure(agrees, || format!("{name}: F_N differs between H = 2 and H = 3"))?;
    }
    Ok("F_N equal at H = 2 and H = 3 on every entry".into())
}

fn structural_spaces() -> Vec<(String, BraidedSpace)> {
    let mut seen: Vec<(String, BraidedSpace)> = Vec::new();
    for (name, p) in problems() {
        if !seen.iter().any(|(_, s)| *s == p.space) {
            seen.push((name.to_string(), p.space));
        }
    }
    seen
}

fn qybe_and_braid_relations(s: &BraidedSpace, name: &str) -> Result<(), String> {
    ensure(s.qybe_defect().is_none(), || format!("{name}: QYBE"))?;
    for n in 3..=if s.dim() == 2 { 5 } else { 4 } {
        let sig: Vec<GradedOperator> = (1..n).map(|i| s.sigma(i, n).unwrap()).collect();
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                let ij = sig[i].compose(&sig[j]).unwrap();
                if i.abs_diff(j) >= 2 {
                    ensure(ij == sig[j].compose(&sig[i]).unwrap(), || {
                        format!("{name}: far commutation n={n}")
                    })?;
                }
                if j == i + 1 {
                    let left = ij.compose(&sig[i]).unwrap();
                    let right = sig[j].compose(&sig[i]).unwrap().compose(&sig[j]).unwrap();
                    ensure(left == right, || format!("{name}: braid relation n={n}"))?;
                }
            }
        }
    }
    Ok(())
}

fn coassociativity(s: &BraidedSpace, name: &str) -> Result<(), String> {
    let id = |k: usize| GradedOperator::identity(s.field(), vec![k], s.dim().pow(k as u32));
    for n in 0..=if s.dim() == 2 { 6 } else { 4 } {
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
                ensure(left.columns() == right.columns(), || {
                    format!("{name}: coassociativity ({p},{q},{r})")
                })?;
            }
        }
    }
    Ok(())
}

fn bialgebra(s: &BraidedSpace, name: &str) -> Result<(), String> {
    let field = s.field();
    for n in 0..=4 {
        for a in 0..=n {
            for u in s.basis(a).words() {
                for v in s.basis(n - a).words() {
                    let uv = u.concat(v);
                    for p in 0..=n {
                        let mut rhs: HashMap<Word, Scalar> = HashMap::new();
                        for p1 in 0..=a.min(p) {
                            let p2 = p - p1;
                            if p2 > n - a {
                                continue;
                            }
                            for (w1, c1) in s.delta_word(u, p1) {
                                let (l1, r1) = w1.split_at(p1);
                                for (w2, c2) in s.delta_word(v, p2) {
                                    let (l2, r2) = w2.split_at(p2);
                                    for (mid, c3) in s.ct_word(&r1.concat(&l2), a - p1) {
                                        let (m1, m2) = mid.split_at(p2);
                                        let key = l1.concat(&m1).concat(&m2).concat(&r2);
                                        let e = rhs.entry(key.clone()).or_insert_with(|| field.zero());
                                        *e += &(&(&c1 * &c2) * &c3);
                                        if e.is_zero() {
                                            rhs.remove(&key);
                                        }
                                    }
                                }
                            }
                        }
                        ensure(s.delta_word(&uv, p) == rhs, || {
                            format!("{name}: Δ(uv) for {u:?}, {v:?}")
                        })?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn reduced_words(s: &BraidedSpace, name: &str) -> Result<(), String> {
    for n in 2..=if s.dim() == 2 { 5 } else { 4 } {
        for w in Permutation::all(n) {
            let reference = s.braid_lift(&w);
            for word in w.reduced_words() {
                ensure(s.braid_lift_along(n, &word) == reference, || {
                    format!("{name}: lift of {word:?}")
                })?;
            }
        }
    }
    Ok(())
}

fn random_matrix(rng: &mut StdRng, field: Field, rows: usize, cols: usize) -> Matrix {
    let grid: Vec<Vec<Scalar>> = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    if rng.gen_bool(0.4) {
                        field.from_i64(rng.gen_range(-3..=3))
                    } else {
                        field.zero()
                    }
                })
                .collect()
        })
        .collect();
    Matrix::from_dense(field, &grid).unwrap()
}

fn grassmann(rng: &mut StdRng) -> Result<usize, String> {
    let mut checks = 0;
    for field in [Field::Rationals, Field::prime(2).unwrap(), Field::prime(3).unwrap()] {
        for _ in 0..40 {
            let (rows, cols) = (rng.gen_range(1..=6), rng.gen_range(1..=7));
            let m = random_matrix(rng, field, rows, cols);
            ensure(m.rank() + kernel(&m).dim() == cols, || format!("{field}: rank-nullity"))?;
            let a = Subspace::span(field, cols, random_matrix(rng, field, rows, cols).rows().to_vec());
            let b = Subspace::span(field, cols, m.rows().to_vec());
            let sum = a.sum(&b).unwrap();
            let meet = a.intersect(&b).unwrap();
            ensure(sum.dim() + meet.dim() == a.dim() + b.dim(), || {
                format!("{field}: Grassmann")
            })?;
            ensure(sum.quotient_dim(&a).unwrap() == b.dim() - meet.dim(), || {
                format!("{field}: quotient")
            })?;
            checks += 1;
        }
    }
    Ok(checks)
}

fn psplits() -> Result<usize, String> {
    let mut stages = 0;
    let mut check = |name: &str, tower: braidkit_core::enveloping::TowerEnvelope| -> Result<(), String> {
        for st in &tower.stages {
            ensure(st.splits, || format!("{name}: stage {} does not split", st.index))?;
            ensure(st.kernel_is_projection_kernel != Some(false), || {
                format!("{name}: stage {} kernel mismatch", st.index)
            })?;
            stages += 1;
        }
        Ok(())
    };
    for (name, s) in structural_spaces() {
        let n = if s.dim() == 2 { 5 } else { 4 };
        let tower = tower_envelope(&s, &TrivialRule, n, 2, n).map_err(|e| format!("{name}: {e}"))?;
        check(&name, tower)?;
    }
    for (name, n) in [("sl2", 4), ("stumbo", 5), ("restricted-gf3", 5)] {
        let p = problem(name);
        let spec = match &p.construction {
            Construction::Direct(b) | Construction::Tower(b) => b.clone(),
            Construction::PrimitiveEnvelope => BracketSpec::Trivial,
        };
        let rule = builtin_rule(&p.space, &spec, n, 2).map_err(|e| format!("{name}: {e}"))?;
        let tower = tower_envelope(&p.space, rule.as_ref(), n, 2, n).map_err(|e| format!("{name}: {e}"))?;
        check(name, tower)?;
    }
    Ok(stages)
}

fn khacosym() -> Result<(), String> {
    for (name, n) in [("flip-d2-char0", 5), ("flip-d3-char0", 4), ("kharchenko", 6)] {
        let p = problem(name);
        let report = khacosym_consistency(&p.space, n, DEFAULT_VALIDITY_MARGIN).map_err(|e| format!("{name}: {e}"))?;
        let rank = report.rank.ok_or_else(|| format!("{name}: rank not certified"))?;
        let s1 = report.stages.iter().find(|st| st.stage == 1);
        if s1.is_some_and(|st| st.cosymmetric) {
            ensure(rank <= 2, || format!("{name}: S^[1] cosymmetric but rank {rank}"))?;
        }
        for st in &report.stages {
            ensure(!st.cosymmetric || rank <= st.stage + 1, || {
                format!("{name}: stage {}", st.stage)
            })?;
        }
    }
    Ok(())
}

fn c8_structural() -> Outcome {
    let spaces = structural_spaces();
    for (name, s) in &spaces {
        qybe_and_braid_relations(s, name)?;
        coassociativity(s, name)?;
        bialgebra(s, name)?;
        reduced_words(s, name)?;
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let grassmann_checks = grassmann(&mut rng)?;
    let stages = psplits()?;
    khacosym()?;
    Ok(format!(
        "{} braidings, {grassmann_checks} random subspace pairs, {stages} tower stages split, cosymmetry bound holds",
        spaces.len()
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("nichols tower = symmetrizer", c1_oracle_agreement),
        ("combinatorial rank", c2_rank),
        ("stumbo envelope", c3_stumbo),
        ("sl2 envelope", c4_sl2),
        ("restricted envelopes", c5_restricted),
        ("PBW equivalence", c6_equivalence),
        ("headroom stabilization", c7_headroom),
        ("structural suites", c8_structural),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} PASS {title}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL {title}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        8 - failed,
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
