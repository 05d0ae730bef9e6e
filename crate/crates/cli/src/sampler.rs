//! Repeated-attempt sampler and empirical uniformity harness.
//!
//! The sampler runs up to `T` independent walks of a fixed length from a
//! greedy proper coloring and returns the first proper terminal state,
//! falling back to the greedy coloring after `T` failures. Properness is
//! checked only at the end of each walk, never mid-run. With the walk
//! length set to the chain's mixing time for the tightened bias
//! `delta1 = delta / (kn+1)^2` and `T = ceil(ln(3/delta) * (kn+2)^2)`,
//! the output distribution is within `delta` of uniform over the proper
//! colorings.

use std::fmt;

use colorsampler_core::chain::{simulate, ChainConfig, ChainKind};
use colorsampler_core::coloring::{classify, greedy_proper_coloring, Coloring};
use colorsampler_core::graph::Graph;
use colorsampler_core::space::StateSpace;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Seed stride between attempts of one sample: a 64-bit golden-ratio
/// constant, so consecutive attempt seeds differ in most bits.
pub const ATTEMPT_SEED_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

/// Seed stride between trials of the uniformity harness; distinct from the
/// attempt stride so trial and attempt seed lattices do not coincide.
pub const TRIAL_SEED_STRIDE: u64 = 0xD1B5_4A32_D192_ED03;

/// Configuration rejected before any sampling ran.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Sampler parameters with the derived bias split and attempt budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerParams {
    pub k: usize,
    /// Total bias budget; the output is within `delta` of uniform.
    pub delta: f64,
    /// Per-walk mixing target `delta / (kn+1)^2`.
    pub delta1: f64,
    /// Attempt budget `T = ceil(ln(3/delta) * (kn+2)^2)`.
    pub max_attempts: u64,
    /// Walk length per attempt.
    pub steps: u64,
    pub seed: u64,
}

impl SamplerParams {
    /// Validates the configuration and derives `delta1` and the attempt
    /// budget. Requires `k >= max_degree + 2` (so flawed states remain
    /// repairable and the chain is irreducible) and `delta` in (0, 1).
    pub fn new(
        g: &Graph,
        k: usize,
        delta: f64,
        steps: u64,
        seed: u64,
    ) -> Result<Self, ConfigError> {
        let d = g.max_degree();
        if k < d + 2 {
            return Err(ConfigError(format!(
                "need at least {} colors (max degree {d} plus 2) so every flawed \
                 state stays repairable and the chain is irreducible; got {k}",
                d + 2
            )));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(ConfigError(format!(
                "bias delta must lie strictly between 0 and 1; got {delta}"
            )));
        }
        let kn = (k * g.n()) as f64;
        let delta1 = delta / ((kn + 1.0) * (kn + 1.0));
        let max_attempts = ((3.0 / delta).ln() * (kn + 2.0) * (kn + 2.0)).ceil() as u64;
        debug_assert!(delta1 < delta);
        debug_assert!(max_attempts >= 1);
        Ok(Self {
            k,
            delta,
            delta1,
            max_attempts,
            steps,
            seed,
        })
    }

    /// Slack of the color count over the maximum degree, `k/max_degree - 1`;
    /// infinite for edgeless graphs. Diagnostic only.
    pub fn epsilon(&self, g: &Graph) -> f64 {
        let d = g.max_degree();
        if d == 0 {
            f64::INFINITY
        } else {
            self.k as f64 / d as f64 - 1.0
        }
    }
}

/// One sampler run: the returned coloring is always proper.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleOutcome {
    pub coloring: Coloring,
    /// Attempts consumed, counting the successful one.
    pub attempts: u64,
    /// True when every attempt ended flawed and the greedy start was
    /// returned instead.
    pub fallback: bool,
}

/// Runs up to `max_attempts` seeded walks and returns the first proper
/// terminal coloring, or the greedy start with the fallback flag set.
pub fn sample_proper_coloring(
    g: &Graph,
    params: &SamplerParams,
) -> Result<SampleOutcome, ConfigError> {
    let cfg = ChainConfig {
        kind: ChainKind::SingleFlaw,
        k: params.k,
    };
    let start = greedy_proper_coloring(g, params.k).map_err(|e| ConfigError(e.to_string()))?;
    for attempt in 1..=params.max_attempts {
        let seed = params
            .seed
            .wrapping_add(attempt.wrapping_mul(ATTEMPT_SEED_STRIDE));
        let end = simulate(g, &cfg, &start, params.steps, seed)
            .map_err(|e| ConfigError(e.to_string()))?;
        if classify(g, &end).is_proper() {
            return Ok(SampleOutcome {
                coloring: end,
                attempts: attempt,
                fallback: false,
            });
        }
    }
    Ok(SampleOutcome {
        coloring: start,
        attempts: params.max_attempts,
        fallback: true,
    })
}

/// Empirical uniformity of sampler output over the proper colorings.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformityReport {
    pub trials: u64,
    pub num_proper: usize,
    /// Hits per proper state, indexed like the state space's proper block.
    pub counts: Vec<u64>,
    /// Total-variation distance between the empirical distribution and
    /// uniform.
    pub tv: f64,
    pub chi_square: f64,
    pub degrees_of_freedom: usize,
    /// 99th percentile of the reference distribution with those degrees of
    /// freedom.
    pub critical_99: f64,
    /// True when the statistic stays below the critical value.
    pub pass: bool,
    /// True when `trials < 10 * num_proper`, too few for a sharp verdict.
    pub low_power: bool,
    pub fallback_count: u64,
}

/// Total-variation distance to uniform and the chi-square statistic for a
/// vector of category counts.
pub fn uniformity_stats(counts: &[u64]) -> (f64, f64) {
    let trials: u64 = counts.iter().sum();
    let cells = counts.len() as f64;
    let total = trials as f64;
    let expected = total / cells;
    let mut tv = 0.0;
    let mut chi = 0.0;
    for &c in counts {
        let observed = c as f64;
        tv += (observed / total - 1.0 / cells).abs();
        let diff = observed - expected;
        chi += diff * diff / expected;
    }
    (tv / 2.0, chi)
}

/// 99th percentile of the chi-square distribution with `df` degrees of
/// freedom.
pub fn chi_square_critical_99(df: usize) -> f64 {
    ChiSquared::new(df as f64)
        .expect("positive degrees of freedom")
        .inverse_cdf(0.99)
}

/// Scores a finished tally. Usable directly on counts from any source,
/// which lets the harness itself be tested against a perfect uniform
/// sampler.
pub fn evaluate_uniformity(counts: Vec<u64>, fallback_count: u64) -> UniformityReport {
    assert!(
        counts.len() >= 2,
        "uniformity needs at least two proper colorings"
    );
    let trials: u64 = counts.iter().sum();
    let (tv, chi_square) = uniformity_stats(&counts);
    let degrees_of_freedom = counts.len() - 1;
    let critical_99 = chi_square_critical_99(degrees_of_freedom);
    UniformityReport {
        trials,
        num_proper: counts.len(),
        tv,
        chi_square,
        degrees_of_freedom,
        critical_99,
        pass: chi_square <= critical_99,
        low_power: trials < 10 * counts.len() as u64,
        counts,
        fallback_count,
    }
}

/// Runs the sampler `trials` times with per-trial derived seeds and scores
/// the tally over the proper block of `space`.
pub fn uniformity_test(
    g: &Graph,
    params: &SamplerParams,
    trials: u64,
    space: &StateSpace,
) -> Result<UniformityReport, ConfigError> {
    if space.k() != params.k {
        return Err(ConfigError(format!(
            "state space was enumerated with k={} but the sampler uses k={}",
            space.k(),
            params.k
        )));
    }
    if space.num_proper() < 2 {
        return Err(ConfigError(
            "uniformity needs at least two proper colorings".into(),
        ));
    }
    let mut counts = vec![0u64; space.num_proper()];
    let mut fallback_count = 0u64;
    for trial in 0..trials {
        let per_trial = SamplerParams {
            seed: params
                .seed
                .wrapping_add(trial.wrapping_mul(TRIAL_SEED_STRIDE)),
            ..*params
        };
        let outcome = sample_proper_coloring(g, &per_trial)?;
        if outcome.fallback {
            fallback_count += 1;
        }
        let idx = space
            .index_of(&outcome.coloring)
            .filter(|&i| space.is_proper_index(i))
            .ok_or_else(|| ConfigError("sampler emitted a coloring outside the proper block".into()))?;
        counts[idx] += 1;
    }
    Ok(evaluate_uniformity(counts, fallback_count))
}
