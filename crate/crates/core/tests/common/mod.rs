#![allow(dead_code, clippy::needless_range_loop)]

use ctmc_limit::{validate, IntensityMatrix64, Matrix, Matrix64};
use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random intensity matrix with planted structure.
pub struct Planted {
    pub b: IntensityMatrix64,
    /// Planted recurrence classes, sorted, in state numbering after shuffling.
    pub classes: Vec<Vec<usize>>,
    pub transient: Vec<usize>,
}

pub struct CorpusSpec {
    pub max_n: usize,
    pub max_classes: usize,
    pub max_transient: usize,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        Self {
            max_n: 50,
            max_classes: 4,
            max_transient: 10,
        }
    }
}

fn rate(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(0.1..=10.0)
}

/// 1–4 closed classes (each irreducible: a random cycle plus extra edges),
/// 0–10 transient states that each leak into at least one class, rates in
/// [0.1, 10], states shuffled.
pub fn planted(rng: &mut ChaCha8Rng, spec: &CorpusSpec) -> Planted {
    let k = rng.random_range(1..=spec.max_classes);
    let m = rng.random_range(0..=spec.max_transient.min(spec.max_n - k));
    let n = rng.random_range((k + m).max(2)..=spec.max_n);
    let r = n - m;

    // split r recurrent states into k non-empty classes
    let mut cuts: Vec<usize> = (1..r).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(k - 1).collect();
    cuts.sort_unstable();
    let mut bounds = vec![0];
    bounds.extend(cuts);
    bounds.push(r);

    let mut raw = vec![vec![0.0; n]; n];
    let mut blocks = Vec::new();
    for w in bounds.windows(2) {
        let members: Vec<usize> = (w[0]..w[1]).collect();
        let mut cycle = members.clone();
        cycle.shuffle(rng);
        if cycle.len() > 1 {
            for (i, &a) in cycle.iter().enumerate() {
                let b = cycle[(i + 1) % cycle.len()];
                raw[a][b] = rate(rng);
            }
            let p_extra = rng.random_range(0.0..0.5);
            for &a in &members {
                for &b in &members {
                    if a != b && raw[a][b] == 0.0 && rng.random_bool(p_extra) {
                        raw[a][b] = rate(rng);
                    }
                }
            }
        }
        blocks.push(members);
    }
    for t in r..n {
        let target = rng.random_range(0..r);
        raw[t][target] = rate(rng);
        for j in 0..n {
            if j != t && raw[t][j] == 0.0 && rng.random_bool(0.15) {
                raw[t][j] = rate(rng);
            }
        }
    }
    for (i, row) in raw.iter_mut().enumerate() {
        row[i] = -row.iter().sum::<f64>();
    }

    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    // old state s becomes new state perm[s]
    let mut shuffled = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            shuffled[perm[i]][perm[j]] = raw[i][j];
        }
    }
    let mut classes: Vec<Vec<usize>> = blocks
        .iter()
        .map(|c| {
            let mut c: Vec<usize> = c.iter().map(|&s| perm[s]).collect();
            c.sort_unstable();
            c
        })
        .collect();
    classes.sort();
    let mut transient: Vec<usize> = (r..n).map(|s| perm[s]).collect();
    transient.sort_unstable();

    let b = validate(&Matrix::from_rows(&shuffled).unwrap(), 1e-9).expect("generator is valid");
    Planted {
        b,
        classes,
        transient,
    }
}

pub fn corpus(seed: u64, count: usize, spec: &CorpusSpec) -> Vec<Planted> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| planted(&mut rng, spec)).collect()
}

/// Spectral gap: smallest `−Re λ` over the eigenvalues of `B` left after
/// removing the `zero_count` eigenvalues of smallest modulus.
pub fn spectral_gap(b: &Matrix64, zero_count: usize) -> f64 {
    let n = b.rows();
    let dm = DMatrix::from_row_slice(n, n, b.as_slice());
    let mut eig: Vec<_> = dm.complex_eigenvalues().iter().copied().collect();
    eig.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    eig[zero_count..]
        .iter()
        .map(|l| -l.re)
        .fold(f64::INFINITY, f64::min)
}

/// Communicating classes and their closedness from the boolean matrix
/// `C = A + A² + … + A^{n−1}`, evaluated literally with boolean products.
pub fn c_matrix_classes(adj: &Matrix<bool>) -> (Vec<Vec<usize>>, Vec<bool>) {
    let n = adj.rows();
    let a: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| i != j && adj.get(i, j)).collect())
        .collect();
    let mut c = vec![vec![false; n]; n];
    let mut power = a.clone();
    for _ in 1..n {
        for i in 0..n {
            for j in 0..n {
                c[i][j] |= power[i][j];
            }
        }
        let mut next = vec![vec![false; n]; n];
        for i in 0..n {
            for k in 0..n {
                if power[i][k] {
                    for j in 0..n {
                        next[i][j] |= a[k][j];
                    }
                }
            }
        }
        power = next;
    }
    let mut assigned = vec![false; n];
    let mut classes = Vec::new();
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&j| j == i || (c[i][j] && c[j][i])).collect();
        for &j in &members {
            assigned[j] = true;
        }
        classes.push(members);
    }
    let closed = classes
        .iter()
        .map(|cls| {
            cls.iter()
                .all(|&i| (0..n).all(|j| !a[i][j] || cls.contains(&j)))
        })
        .collect();
    (classes, closed)
}

pub fn random_digraph(rng: &mut ChaCha8Rng, max_n: usize) -> Matrix<bool> {
    let n = rng.random_range(1..=max_n);
    let p = rng.random_range(0.05..0.6);
    Matrix::from_fn(n, n, |_, _| rng.random_bool(p))
}
