//! Single-flaw and Glauber chains: steps, trajectories, exact transition
//! matrices, total-variation mixing times, and the congestion mixing bound.
//!
//! Both chains are lazy (idle with probability 1/2) and symmetric, so the
//! stationary distribution is uniform over their state spaces: all proper
//! and singly-flawed colorings for the single-flaw chain, proper colorings
//! only for Glauber. Randomness is one seeded generator per trajectory; the
//! laziness coin and the proposal draw collapse into a single draw over
//! `2*k*n` (or `2*n`) outcomes so a trajectory is a pure function of its
//! 64-bit seed.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coloring::{available_colors, classify, Coloring, ColoringError};
use crate::graph::Graph;
use crate::space::StateSpace;

/// Default cap on state count for exact transition matrices.
pub const DEFAULT_MATRIX_BUDGET: usize = 20_000;

/// Default iteration cap for exact mixing-time computation.
pub const DEFAULT_MIXING_CAP: u64 = 1_000_000;

/// Slack for threshold comparisons on iterated double-precision TV values.
pub const TV_SLACK: f64 = 1e-10;

/// Tolerance for distribution-vector validation.
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainKind {
    SingleFlaw,
    Glauber,
}

/// Chain parameters; the laziness probability is fixed at 1/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainConfig {
    pub kind: ChainKind,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChainError {
    InvalidColorCount { k: usize },
    /// Single-flaw steps need a proper or singly-flawed input.
    StartNotInStateSpace,
    /// Glauber steps need a proper input.
    StartNotProper,
    /// No available color at a vertex (requires `k <= max degree`).
    NoAvailableColor { vertex: usize },
    Coloring(ColoringError),
    MatrixBudgetExceeded { states: usize, budget: usize },
    DimensionMismatch { left: usize, right: usize },
    InvalidDelta { delta: f64 },
    NotIrreducible { reached: usize, total: usize },
    MixingCapExceeded { cap: u64, last_tv: f64 },
    /// Worst-case TV rose back above the threshold during verification.
    TvNotMonotone { step: u64, tv: f64, delta: f64 },
    NotADistribution { sum: f64 },
}

impl fmt::Display for ChainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainError::InvalidColorCount { k } => write!(f, "invalid color count k={k}"),
            ChainError::StartNotInStateSpace => {
                write!(f, "coloring is neither proper nor singly-flawed")
            }
            ChainError::StartNotProper => write!(f, "coloring is not proper"),
            ChainError::NoAvailableColor { vertex } => {
                write!(f, "no available color at vertex {vertex}")
            }
            ChainError::Coloring(e) => write!(f, "{e}"),
            ChainError::MatrixBudgetExceeded { states, budget } => {
                write!(f, "{states} states exceed the matrix budget of {budget}")
            }
            ChainError::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
            ChainError::InvalidDelta { delta } => {
                write!(f, "delta must be positive, got {delta}")
            }
            ChainError::NotIrreducible { reached, total } => write!(
                f,
                "chain is not irreducible: {reached} of {total} states reachable"
            ),
            ChainError::MixingCapExceeded { cap, last_tv } => write!(
                f,
                "no TV crossing within {cap} iterations (last TV {last_tv:.3e})"
            ),
            ChainError::TvNotMonotone { step, tv, delta } => write!(
                f,
                "TV {tv:.3e} exceeded delta {delta:.3e} again at step {step} after crossing"
            ),
            ChainError::NotADistribution { sum } => {
                write!(f, "vector is not a probability distribution (sum {sum})")
            }
        }
    }
}

impl core::error::Error for ChainError {}

impl From<ColoringError> for ChainError {
    fn from(e: ColoringError) -> Self {
        ChainError::Coloring(e)
    }
}

/// Applies a single-flaw proposal `(v, c)` to `sigma`.
///
/// Returns the recolored state when it stays in the state space, `None`
/// when the move is rejected. Proposing the current color is accepted and
/// returns the unchanged coloring.
pub fn single_flaw_proposal(
    g: &Graph,
    sigma: &Coloring,
    v: usize,
    c: usize,
) -> Option<Coloring> {
    if sigma.color(v) == c {
        return Some(sigma.clone());
    }
    let next = sigma.recolored(v, c);
    classify(g, &next).in_state_space().then_some(next)
}

fn single_flaw_step_in_place<R: Rng>(
    g: &Graph,
    k: usize,
    sigma: &mut Coloring,
    rng: &mut R,
) {
    let n = g.n();
    let r = rng.gen_range(0..2 * k * n);
    // First half of the outcomes is the laziness coin; the rest decodes to a
    // uniform (vertex, color) proposal.
    if r < k * n {
        return;
    }
    let m = r - k * n;
    let v = m / k + 1;
    let c = m % k + 1;
    let old = sigma.color(v);
    if c == old {
        return;
    }
    sigma.set_color(v, c);
    if !classify(g, sigma).in_state_space() {
        sigma.set_color(v, old);
    }
}

/// One step of the single-flaw chain.
///
/// With probability 1/2 idles; otherwise draws `(v, c)` uniformly over
/// vertices and colors, recolors, and reverts iff the result is neither
/// proper nor singly-flawed.
pub fn single_flaw_step<R: Rng>(
    g: &Graph,
    cfg: &ChainConfig,
    sigma: &Coloring,
    rng: &mut R,
) -> Result<Coloring, ChainError> {
    validate_start(g, cfg, sigma)?;
    let mut next = sigma.clone();
    single_flaw_step_in_place(g, cfg.k, &mut next, rng);
    Ok(next)
}

fn glauber_step_in_place<R: Rng>(
    g: &Graph,
    k: usize,
    sigma: &mut Coloring,
    rng: &mut R,
) -> Result<(), ChainError> {
    let n = g.n();
    let r = rng.gen_range(0..2 * n);
    if r < n {
        return Ok(());
    }
    let v = r - n + 1;
    let avail = available_colors(g, sigma, v, k);
    if avail.is_empty() {
        return Err(ChainError::NoAvailableColor { vertex: v });
    }
    let c = avail[rng.gen_range(0..avail.len())];
    sigma.set_color(v, c);
    Ok(())
}

/// One step of the Glauber chain: idle with probability 1/2, else recolor a
/// uniform vertex with a uniform available color. Never leaves the proper
/// colorings; errors if availability is empty (needs `k >= max degree + 1`).
pub fn glauber_step<R: Rng>(
    g: &Graph,
    cfg: &ChainConfig,
    sigma: &Coloring,
    rng: &mut R,
) -> Result<Coloring, ChainError> {
    validate_start(g, cfg, sigma)?;
    let mut next = sigma.clone();
    glauber_step_in_place(g, cfg.k, &mut next, rng)?;
    Ok(next)
}

fn validate_start(g: &Graph, cfg: &ChainConfig, start: &Coloring) -> Result<(), ChainError> {
    if cfg.k == 0 {
        return Err(ChainError::InvalidColorCount { k: cfg.k });
    }
    start.validate(g, cfg.k)?;
    match cfg.kind {
        ChainKind::SingleFlaw => {
            if !classify(g, start).in_state_space() {
                return Err(ChainError::StartNotInStateSpace);
            }
        }
        ChainKind::Glauber => {
            if !classify(g, start).is_proper() {
                return Err(ChainError::StartNotProper);
            }
        }
    }
    Ok(())
}

/// Runs `steps` chain steps from `start` with a fresh generator seeded by
/// `seed`. Same seed, same trajectory.
pub fn simulate(
    g: &Graph,
    cfg: &ChainConfig,
    start: &Coloring,
    steps: u64,
    seed: u64,
) -> Result<Coloring, ChainError> {
    validate_start(g, cfg, start)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sigma = start.clone();
    for _ in 0..steps {
        match cfg.kind {
            ChainKind::SingleFlaw => {
                single_flaw_step_in_place(g, cfg.k, &mut sigma, &mut rng);
                debug_assert!(classify(g, &sigma).in_state_space());
            }
            ChainKind::Glauber => {
                glauber_step_in_place(g, cfg.k, &mut sigma, &mut rng)?;
                debug_assert!(classify(g, &sigma).is_proper());
            }
        }
    }
    Ok(sigma)
}

/// Exact lazy transition matrix over state-space indices.
///
/// Rows follow [`StateSpace`] indexing; the Glauber matrix covers only the
/// proper block `0..num_proper`. Off-diagonal entries are stored sparsely,
/// the diagonal separately; all entries are exact rationals.
#[derive(Debug, Clone)]
pub struct TransitionMatrix {
    dim: usize,
    rows: Vec<Vec<(usize, BigRational)>>,
    diag: Vec<BigRational>,
}

impl TransitionMatrix {
    pub fn build(
        g: &Graph,
        cfg: &ChainConfig,
        space: &StateSpace,
        budget: usize,
    ) -> Result<Self, ChainError> {
        if cfg.k != space.k() {
            return Err(ChainError::InvalidColorCount { k: cfg.k });
        }
        let n = g.n();
        let k = cfg.k;
        let dim = match cfg.kind {
            ChainKind::SingleFlaw => space.len(),
            ChainKind::Glauber => space.num_proper(),
        };
        if dim > budget {
            return Err(ChainError::MatrixBudgetExceeded {
                states: dim,
                budget,
            });
        }
        let mut rows = Vec::with_capacity(dim);
        let mut diag = Vec::with_capacity(dim);
        for i in 0..dim {
            let sigma = space.state(i);
            let mut row: BTreeMap<usize, BigRational> = BTreeMap::new();
            match cfg.kind {
                ChainKind::SingleFlaw => {
                    let step = BigRational::new(BigInt::one(), BigInt::from(2 * k * n));
                    for v in g.vertices() {
                        for c in 1..=k {
                            if c == sigma.color(v) {
                                continue;
                            }
                            let next = sigma.recolored(v, c);
                            if let Some(j) = space.index_of(&next) {
                                *row.entry(j).or_insert_with(BigRational::zero) += &step;
                            }
                        }
                    }
                }
                ChainKind::Glauber => {
                    for v in g.vertices() {
                        let avail = available_colors(g, sigma, v, k);
                        if avail.is_empty() {
                            return Err(ChainError::NoAvailableColor { vertex: v });
                        }
                        let step =
                            BigRational::new(BigInt::one(), BigInt::from(2 * n * avail.len()));
                        for &c in &avail {
                            if c == sigma.color(v) {
                                continue;
                            }
                            let next = sigma.recolored(v, c);
                            let j = space
                                .index_of(&next)
                                .expect("recoloring with an available color stays proper");
                            debug_assert!(j < dim);
                            *row.entry(j).or_insert_with(BigRational::zero) += &step;
                        }
                    }
                }
            }
            let off_sum: BigRational = row.values().fold(BigRational::zero(), |a, b| a + b);
            diag.push(BigRational::one() - off_sum);
            rows.push(row.into_iter().collect());
        }
        Ok(TransitionMatrix { dim, rows, diag })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Off-diagonal entries of row `i`, sorted by column.
    pub fn off_diagonal(&self, i: usize) -> &[(usize, BigRational)] {
        &self.rows[i]
    }

    pub fn diagonal(&self, i: usize) -> &BigRational {
        &self.diag[i]
    }

    pub fn entry(&self, i: usize, j: usize) -> BigRational {
        if i == j {
            return self.diag[i].clone();
        }
        match self.rows[i].binary_search_by_key(&j, |&(col, _)| col) {
            Ok(pos) => self.rows[i][pos].1.clone(),
            Err(_) => BigRational::zero(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| {
            self.rows[i]
                .iter()
                .all(|&(j, ref p)| &self.entry(j, i) == p)
        })
    }

    pub fn rows_sum_to_one(&self) -> bool {
        (0..self.dim).all(|i| {
            let sum = self.rows[i]
                .iter()
                .fold(self.diag[i].clone(), |a, (_, p)| a + p);
            sum.is_one()
        })
    }

    pub fn diagonal_at_least_half(&self) -> bool {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        self.diag.iter().all(|d| *d >= half)
    }

    /// Exact check that the uniform vector is a left fixed point.
    pub fn uniform_is_stationary(&self) -> bool {
        let mut col_sums = vec![BigRational::zero(); self.dim];
        for i in 0..self.dim {
            col_sums[i] += &self.diag[i];
            for &(j, ref p) in &self.rows[i] {
                col_sums[j] += p;
            }
        }
        col_sums.iter().all(BigRational::is_one)
    }

    /// Full sparse rows (diagonal merged) in double precision.
    pub fn to_f64_rows(&self) -> Vec<Vec<(usize, f64)>> {
        (0..self.dim)
            .map(|i| {
                let mut row: Vec<(usize, f64)> = Vec::with_capacity(self.rows[i].len() + 1);
                let mut pushed_diag = false;
                for &(j, ref p) in &self.rows[i] {
                    if !pushed_diag && j > i {
                        row.push((i, rational_to_f64(&self.diag[i])));
                        pushed_diag = true;
                    }
                    row.push((j, rational_to_f64(p)));
                }
                if !pushed_diag {
                    row.push((i, rational_to_f64(&self.diag[i])));
                }
                row
            })
            .collect()
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("rational fits in f64 range")
}

/// Checks nonnegativity and unit sum within [`DISTRIBUTION_TOLERANCE`].
pub fn validate_distribution(p: &[f64]) -> Result<(), ChainError> {
    let sum: f64 = p.iter().sum();
    if p.iter().any(|&x| x < 0.0) || (sum - 1.0).abs() > DISTRIBUTION_TOLERANCE {
        return Err(ChainError::NotADistribution { sum });
    }
    Ok(())
}

/// Total variation distance `(1/2) * sum |mu_i - nu_i|`.
pub fn tv_distance(mu: &[f64], nu: &[f64]) -> Result<f64, ChainError> {
    if mu.len() != nu.len() {
        return Err(ChainError::DimensionMismatch {
            left: mu.len(),
            right: nu.len(),
        });
    }
    Ok(mu.iter().zip(nu).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0)
}

/// Smallest `t` with worst-start TV distance to uniform at most `delta`.
///
/// Iterates each start row in double precision. Worst-case TV to the
/// stationary distribution never increases, so the first crossing is final;
/// each start is still verified for 10 further steps (with [`TV_SLACK`])
/// and irreducibility is checked up front by a reachability scan.
pub fn exact_mixing_time(
    p: &TransitionMatrix,
    delta: f64,
    cap: u64,
) -> Result<u64, ChainError> {
    if delta <= 0.0 || !delta.is_finite() {
        return Err(ChainError::InvalidDelta { delta });
    }
    if delta >= 1.0 {
        return Ok(0);
    }
    let dim = p.dim();
    // Reachability over off-diagonal support (symmetric matrices).
    let mut seen = vec![false; dim];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut reached = 1usize;
    while let Some(i) = stack.pop() {
        for &(j, _) in p.off_diagonal(i) {
            if !seen[j] {
                seen[j] = true;
                reached += 1;
                stack.push(j);
            }
        }
    }
    if reached < dim {
        return Err(ChainError::NotIrreducible {
            reached,
            total: dim,
        });
    }
    let rows = p.to_f64_rows();
    let uniform = vec![1.0 / dim as f64; dim];
    let advance = |dist: &[f64]| {
        let mut next = vec![0.0f64; dim];
        for (i, &mass) in dist.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            for &(j, pij) in &rows[i] {
                next[j] += mass * pij;
            }
        }
        next
    };
    let mut worst = 0u64;
    for start in 0..dim {
        let mut dist = vec![0.0f64; dim];
        dist[start] = 1.0;
        let mut t = 0u64;
        loop {
            let tv = tv_distance(&dist, &uniform)?;
            if tv <= delta + TV_SLACK {
                break;
            }
            if t >= cap {
                return Err(ChainError::MixingCapExceeded { cap, last_tv: tv });
            }
            dist = advance(&dist);
            t += 1;
        }
        for extra in 1..=10u64 {
            dist = advance(&dist);
            let tv = tv_distance(&dist, &uniform)?;
            if tv > delta + TV_SLACK {
                return Err(ChainError::TvNotMonotone {
                    step: t + extra,
                    tv,
                    delta,
                });
            }
        }
        worst = worst.max(t);
    }
    Ok(worst)
}

/// Closed-form upper bound on the single-flaw mixing time.
///
/// Congestion bound `rho = 8*k^3*(lambda+1)*n^5*log2(n)*(k/(k-d))^(2*pw)`
/// times `n*ln(k) + ln(1/delta)`, where `d` is the maximum degree. The
/// `log2(n)` factor makes the bound degenerate to 0 for `n = 1`.
pub fn theoretical_tau_bound(
    n: usize,
    max_degree: usize,
    k: usize,
    pw: usize,
    lambda: f64,
    delta: f64,
) -> f64 {
    assert!(k >= max_degree + 2, "bound requires k >= max degree + 2");
    assert!(delta > 0.0, "delta must be positive");
    use num_traits::Float;
    let nf = n as f64;
    let kf = k as f64;
    let ratio = kf / (k - max_degree) as f64;
    let rho = 8.0
        * Float::powi(kf, 3)
        * (lambda + 1.0)
        * Float::powi(nf, 5)
        * Float::log2(nf)
        * Float::powi(ratio, 2 * pw as i32);
    rho * (nf * Float::ln(kf) + Float::ln(1.0 / delta))
}
