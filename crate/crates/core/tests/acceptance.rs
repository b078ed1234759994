//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each, and
//! exits non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::{c_matrix_classes, corpus, random_digraph, spectral_gap, CorpusSpec, Planted};
use ctmc_limit::{
    absorption_vector, adaptive_horizon, classify_states, final_limit, resolvent, simulate,
    transition_matrix, validate, InvariantBounds, Matrix, Matrix64, Tolerances,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CORPUS_SEED: u64 = 20_240_601;
const CORPUS_SIZE: usize = 200;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn oracle_triangle(corpus: &[Planted]) -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for (idx, m) in corpus.iter().enumerate() {
        let p = match final_limit(&m.b) {
            Ok(l) => l.p,
            Err(e) => {
                failures.push(format!("#{idx}: final_limit {e}"));
                continue;
            }
        };
        let t = match adaptive_horizon(&m.b, 1e-10) {
            Ok(t) => t,
            Err(e) => {
                failures.push(format!("#{idx}: horizon {e}"));
                continue;
            }
        };
        let e = transition_matrix(&m.b, t).expect("t >= 0");
        let d = p.max_abs_diff(&e);
        worst = worst.max(d);
        if d > 1e-8 {
            failures.push(format!("#{idx} (n={}, t*={t}): {d:e}", m.b.n()));
        }
    }
    let elapsed = start.elapsed();
    let passed = failures.is_empty() && elapsed < Duration::from_secs(60);
    outcome(
        passed,
        format!(
            "{} matrices, max |P - exp(t*B)| = {worst:.2e} (bound 1e-8), {:.1}s (bound 60s){}",
            corpus.len(),
            elapsed.as_secs_f64(),
            summarize(&failures)
        ),
    )
}

fn resolvent_abelian(corpus: &[Planted]) -> Outcome {
    let zs = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5];
    let mut failures = Vec::new();
    let mut checked_bound = 0;
    let mut worst_final = 0.0f64;
    for (idx, m) in corpus.iter().enumerate() {
        let p = final_limit(&m.b).expect("limit").p;
        let gap = spectral_gap(m.b.matrix(), m.classes.len());
        let errs: Vec<f64> = zs
            .iter()
            .map(|&z| resolvent(&m.b, z).expect("z > 0").max_abs_diff(&p))
            .collect();
        if errs.windows(2).any(|w| w[1] >= w[0]) {
            failures.push(format!("#{idx}: not decreasing {}", sci(&errs)));
        }
        if gap >= 0.1 {
            checked_bound += 1;
            for (&z, &e) in zs.iter().zip(&errs) {
                if e > 10.0 * z / gap {
                    failures.push(format!(
                        "#{idx}: z={z:e} err {e:.2e} > 10z/gap (gap {gap:.3})"
                    ));
                }
            }
        }
        worst_final = worst_final.max(errs[4]);
        if errs[4] > 1e-3 {
            failures.push(format!("#{idx}: final error {:.2e}", errs[4]));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "monotone in z, 10z/gap bound on {checked_bound} matrices with gap >= 0.1, max error at z=1e-5 {worst_final:.2e} (bound 1e-3){}",
            summarize(&failures)
        ),
    )
}

fn structural_invariants(corpus: &[Planted]) -> Outcome {
    let bounds = InvariantBounds {
        row_sum: 1e-12,
        idempotence: 1e-9,
        annihilation: 1e-9,
        absorption_total: 1e-9,
    };
    let mut failures = Vec::new();
    for (idx, m) in corpus.iter().enumerate() {
        let lim = final_limit(&m.b).expect("limit");
        if lim.structure.classes() != m.classes.as_slice()
            || lim.structure.transient() != m.transient.as_slice()
        {
            failures.push(format!(
                "#{idx}: classification differs from planted structure"
            ));
        }
        if let Err(v) = lim.check_invariants(&m.b, &bounds) {
            failures.push(format!("#{idx}: {v}"));
        }
        // exact checks, independent of check_invariants
        let p = &lim.p;
        for &j in lim.structure.transient() {
            if (0..p.rows()).any(|i| p.get(i, j) != 0.0) {
                failures.push(format!("#{idx}: transient column {j} not exactly zero"));
            }
        }
        for class in lim.structure.classes() {
            if class.iter().any(|&i| p.row(i) != p.row(class[0])) {
                failures.push(format!("#{idx}: rows of class {class:?} differ"));
            }
        }
        for (i, total) in lim.absorption.row_totals().iter().enumerate() {
            if (total - 1.0).abs() > 1e-9 {
                failures.push(format!("#{idx}: sum_J f = {total} for transient row {i}"));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "stochastic 1e-12, P^2=P 1e-9, PB=BP=0 1e-9*|B|max, zero transient columns, equal class rows, sum_J f = 1 on {} matrices{}",
            corpus.len(),
            summarize(&failures)
        ),
    )
}

fn closed_forms() -> Outcome {
    let mut failures = Vec::new();
    let tol = Tolerances::<f64>::default();
    let check = |failures: &mut Vec<String>, what: &str, got: f64, want: f64| {
        if (got - want).abs() > 1e-12 {
            failures.push(format!("{what}: {got} vs {want}"));
        }
    };

    let b = validate(
        &Matrix::from_rows(&[[-1.0, 1.0], [3.0, -3.0]]).unwrap(),
        1e-9,
    )
    .unwrap();
    let p = final_limit(&b).unwrap().p;
    for i in 0..2 {
        check(&mut failures, "flip-flop p_i0", p.get(i, 0), 0.75);
        check(&mut failures, "flip-flop p_i1", p.get(i, 1), 0.25);
    }

    let b = validate(
        &Matrix::from_rows(&[[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [1.0, 2.0, -3.0]]).unwrap(),
        1e-9,
    )
    .unwrap();
    let p = final_limit(&b).unwrap().p;
    check(&mut failures, "split p_20", p.get(2, 0), 1.0 / 3.0);
    check(&mut failures, "split p_21", p.get(2, 1), 2.0 / 3.0);
    check(&mut failures, "split p_22", p.get(2, 2), 0.0);

    let b = validate(
        &Matrix::from_rows(&[
            [0.0, 0.0, 0.0, 0.0],
            [1.0, -2.0, 1.0, 0.0],
            [0.0, 1.0, -2.0, 1.0],
            [0.0, 0.0, 0.0, 0.0],
        ])
        .unwrap(),
        1e-9,
    )
    .unwrap();
    let s = classify_states(&b);
    let f = absorption_vector(&b, &s, 0, &tol).unwrap();
    check(&mut failures, "ruin f_1", f[0], 2.0 / 3.0);
    check(&mut failures, "ruin f_2", f[1], 1.0 / 3.0);

    outcome(
        failures.is_empty(),
        format!(
            "flip-flop, split absorption, gambler's ruin within 1e-12{}",
            summarize(&failures)
        ),
    )
}

fn classification_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = Vec::new();
    for idx in 0..500 {
        let g = random_digraph(&mut rng, 8);
        let n = g.rows();
        let raw = Matrix::from_fn(n, n, |i, j| if i != j && g.get(i, j) { 1.0 } else { 0.0 });
        let raw = Matrix::from_fn(n, n, |i, j| {
            if i == j {
                -raw.row(i).iter().sum::<f64>()
            } else {
                raw.get(i, j)
            }
        });
        let b = validate(&raw, 1e-9).unwrap();
        let s = classify_states(&b);
        let (oracle_classes, closed) = c_matrix_classes(&g);
        if s.communicating_classes() != oracle_classes.as_slice() {
            failures.push(format!("graph #{idx}: communicating classes differ"));
            continue;
        }
        let ours: Vec<Vec<usize>> = s.classes().to_vec();
        let theirs: Vec<Vec<usize>> = oracle_classes
            .iter()
            .zip(&closed)
            .filter(|(_, &c)| c)
            .map(|(c, _)| c.clone())
            .collect();
        if ours != theirs {
            failures.push(format!("graph #{idx}: recurrence classes differ"));
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && elapsed < Duration::from_secs(5),
        format!(
            "500 random digraphs n <= 8 agree with boolean A + ... + A^(n-1), {:.2}s (bound 5s){}",
            elapsed.as_secs_f64(),
            summarize(&failures)
        ),
    )
}

fn simulation_consistency() -> Outcome {
    const TRAJECTORIES: u64 = 100_000;
    let start = Instant::now();
    let small = corpus(
        CORPUS_SEED + 1,
        20,
        &CorpusSpec {
            max_n: 6,
            ..CorpusSpec::default()
        },
    );
    let mut failures = Vec::new();
    let mut worst_z = 0.0f64;
    for (idx, m) in small.iter().enumerate() {
        let p = final_limit(&m.b).expect("limit").p;
        let t = adaptive_horizon(&m.b, 1e-10).expect("horizon");
        let seed = 1000 + idx as u64;
        let sim = simulate(&m.b, t, TRAJECTORIES, seed).expect("simulate");
        for i in 0..p.rows() {
            for j in 0..p.cols() {
                let pij = p.get(i, j);
                let sigma = (pij * (1.0 - pij) / TRAJECTORIES as f64).sqrt();
                let dev = (sim.empirical.get(i, j) - pij).abs();
                if sigma > 0.0 {
                    worst_z = worst_z.max(dev / sigma);
                }
                if dev > 4.0 * sigma {
                    failures.push(format!(
                        "#{idx} ({i},{j}): {:.5} vs {pij:.5}",
                        sim.empirical.get(i, j)
                    ));
                }
            }
        }
        if idx < 3 {
            let again = simulate(&m.b, t, TRAJECTORIES, seed).expect("simulate");
            if again != sim {
                failures.push(format!("#{idx}: rerun with seed {seed} differs"));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "20 matrices n <= 6, 1e5 paths per start at t*, worst deviation {worst_z:.2} sigma (bound 4), reruns identical, {:.1}s{}",
            start.elapsed().as_secs_f64(),
            summarize(&failures)
        ),
    )
}

fn semigroup_and_derivative(corpus: &[Planted]) -> Outcome {
    let grid = [0.1, 1.0, 5.0];
    let hs = [1e-3, 1e-4, 1e-5];
    let mut failures = Vec::new();
    let mut worst_semigroup = 0.0f64;
    for (idx, m) in corpus.iter().take(20).enumerate() {
        for &s in &grid {
            for &t in &grid {
                let lhs = transition_matrix(&m.b, s + t).unwrap();
                let rhs = transition_matrix(&m.b, s)
                    .unwrap()
                    .matmul(&transition_matrix(&m.b, t).unwrap())
                    .unwrap();
                let d = lhs.max_abs_diff(&rhs);
                worst_semigroup = worst_semigroup.max(d);
                if d > 1e-10 {
                    failures.push(format!("#{idx} s={s} t={t}: {d:e}"));
                }
            }
        }
        let b = m.b.matrix();
        let n = b.rows();
        let errs: Vec<f64> = hs
            .iter()
            .map(|&h| {
                let e = transition_matrix(&m.b, h).unwrap();
                let fd: Matrix64 = e.sub(&Matrix::identity(n)).unwrap().scale(1.0 / h);
                fd.max_abs_diff(b)
            })
            .collect();
        for (w, &h) in errs.windows(2).zip(&hs) {
            let ratio = w[1] / w[0];
            if !(0.05..=0.2).contains(&ratio) {
                failures.push(format!(
                    "#{idx}: error ratio {ratio:.3} from h={h:e}, errors {}",
                    sci(&errs)
                ));
            }
        }
        let b2 = b.max_abs().powi(2);
        for (&h, &e) in hs.iter().zip(&errs) {
            if e > h * n as f64 * b2 {
                failures.push(format!("#{idx}: h={h:e} error {e:e} above h*n*|B|max^2"));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "max |exp((s+t)B) - exp(sB)exp(tB)| = {worst_semigroup:.2e} (bound 1e-10); finite-difference error shrinks 10x per decade of h{}",
            summarize(&failures)
        ),
    )
}

fn sci(v: &[f64]) -> String {
    v.iter()
        .map(|x| format!("{x:.2e}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn summarize(failures: &[String]) -> String {
    if failures.is_empty() {
        String::new()
    } else {
        let shown: Vec<&str> = failures.iter().take(5).map(String::as_str).collect();
        format!("; {} failure(s): {}", failures.len(), shown.join("; "))
    }
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() {
    let corpus = corpus(CORPUS_SEED, CORPUS_SIZE, &CorpusSpec::default());

    let criteria: Vec<Criterion> = vec![
        (
            "1 oracle triangle on random corpus",
            Box::new(|| oracle_triangle(&corpus)),
        ),
        (
            "2 resolvent Abelian limit",
            Box::new(|| resolvent_abelian(&corpus)),
        ),
        (
            "3 structural invariants",
            Box::new(|| structural_invariants(&corpus)),
        ),
        ("4 closed-form spot checks", Box::new(closed_forms)),
        (
            "5 classification oracle equivalence",
            Box::new(classification_oracle),
        ),
        ("6 simulation consistency", Box::new(simulation_consistency)),
        (
            "7 semigroup and derivative",
            Box::new(|| semigroup_and_derivative(&corpus)),
        ),
    ];

    let mut failed = 0;
    for (name, run) in &criteria {
        let o = run();
        println!(
            "[{}] criterion {name}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.passed {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
