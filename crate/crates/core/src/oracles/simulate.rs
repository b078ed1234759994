use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::chain::{embedded_chain, IntensityMatrix};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

use super::OracleError;

/// Occupied states at a fixed horizon, per start state.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult<T> {
    /// Row `i`: end-state frequencies of paths started in `i`.
    pub empirical: Matrix<T>,
    counts: Vec<u64>,
    pub trajectories_per_start: u64,
    pub horizon: T,
    pub seed: u64,
}

impl<T: Scalar> SimulationResult<T> {
    /// Number of paths started in `from` that occupied `to` at the horizon.
    /// Each row of counts sums to `trajectories_per_start`.
    pub fn count(&self, from: usize, to: usize) -> u64 {
        self.counts[from * self.empirical.cols() + to]
    }
}

struct JumpTable {
    absorbing: Vec<bool>,
    rate: Vec<f64>,
    // cumulative jump distribution per state, with the matching targets
    targets: Vec<Vec<(f64, usize)>>,
}

impl JumpTable {
    fn new<T: Scalar>(b: &IntensityMatrix<T>) -> Self {
        let chain = embedded_chain(b);
        let q = chain.jump_matrix();
        let targets = (0..b.n())
            .map(|i| {
                let mut acc = 0.0;
                (0..b.n())
                    .filter(|&j| j != i && q.get(i, j) > T::zero())
                    .map(|j| {
                        acc += q.get(i, j).as_f64();
                        (acc, j)
                    })
                    .collect()
            })
            .collect();
        Self {
            absorbing: chain.zero_rate_mask().to_vec(),
            rate: chain.rates().iter().map(|d| d.as_f64()).collect(),
            targets,
        }
    }

    fn run(&self, start: usize, horizon: f64, rng: &mut ChaCha8Rng) -> usize {
        let mut state = start;
        let mut clock = 0.0;
        while !self.absorbing[state] {
            // u in (0, 1]
            let u = 1.0 - rng.random::<f64>();
            clock += -u.ln() / self.rate[state];
            if clock > horizon {
                break;
            }
            let row = &self.targets[state];
            let total = row.last().map_or(1.0, |&(c, _)| c);
            let pick = rng.random::<f64>() * total;
            state = row
                .iter()
                .find(|&&(c, _)| pick < c)
                .or(row.last())
                .map(|&(_, j)| j)
                .expect("non-absorbing state has a jump target");
        }
        state
    }
}

/// Monte Carlo estimate of `exp(horizon·B)` from the jump chain.
///
/// A path waits an exponential time with rate `d_i` in state `i` (sampled as
/// `−ln(u)/d_i`) and then jumps according to row `i` of `Q`; states with
/// `b_ii = 0` never leave. Trajectory `k` from start state `i` draws from the
/// ChaCha8 stream `(seed, i·2³² + k)`, so the result does not depend on how
/// the work is scheduled.
pub fn simulate<T: Scalar>(
    b: &IntensityMatrix<T>,
    horizon: T,
    trajectories: u64,
    seed: u64,
) -> Result<SimulationResult<T>, OracleError> {
    if horizon < T::zero() || !horizon.is_finite() {
        return Err(OracleError::Domain {
            what: "horizon",
            value: horizon.as_f64(),
        });
    }
    if trajectories == 0 || trajectories > u64::from(u32::MAX) {
        return Err(OracleError::Domain {
            what: "trajectories",
            value: trajectories as f64,
        });
    }
    let n = b.n();
    let table = JumpTable::new(b);
    let base = ChaCha8Rng::seed_from_u64(seed);
    let h = horizon.as_f64();

    let rows: Vec<Vec<u64>> = (0..n)
        .into_par_iter()
        .map(|start| {
            let mut counts = vec![0u64; n];
            for k in 0..trajectories {
                let mut rng = base.clone();
                rng.set_stream(((start as u64) << 32) | k);
                counts[table.run(start, h, &mut rng)] += 1;
            }
            counts
        })
        .collect();

    let counts: Vec<u64> = rows.into_iter().flatten().collect();
    let denom = T::of(trajectories as f64);
    let empirical = Matrix::from_fn(n, n, |i, j| T::of(counts[i * n + j] as f64) / denom);
    Ok(SimulationResult {
        empirical,
        counts,
        trajectories_per_start: trajectories,
        horizon,
        seed,
    })
}
