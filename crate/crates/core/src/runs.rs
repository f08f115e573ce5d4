//! Wald-Wolfowitz runs test on the signs of day-to-day price changes.
//!
//! A run is a maximal block of consecutive changes with the same sign. The
//! observed run count R is compared to its null mean and standard
//! deviation for the given sign counts; with N = n_pos + n_neg,
//!
//! ```text
//! mu      = 2 * n_pos * n_neg / N + 1
//! sigma^2 = 2 * n_pos * n_neg * (2 * n_pos * n_neg - N) / (N^2 * (N - 1))
//! Z       = (R - mu) / sigma
//! ```
//!
//! and Z is referred to the standard normal (large-sample approximation).

use serde::{Deserialize, Serialize};

use crate::dist::{two_sided_p, NullDistribution};
use crate::error::{EmhError, Result};
use crate::series::{ChangeSign, PriceSeries};

/// How zero (no-change) days are handled before counting runs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroPolicy {
    /// Drop zero changes entirely (default; matches published counts where
    /// observations minus one equals positives plus negatives).
    #[default]
    Exclude,
    /// A zero change carries the sign of the previous effective change.
    /// Leading zeros with no previous sign are dropped and counted.
    TreatAsPrevious,
}

/// Tallies from a sign sequence after zero handling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunCounts {
    pub runs: usize,
    pub n_pos: usize,
    pub n_neg: usize,
    pub n_zero_excluded: usize,
}

/// Full runs-test result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunsSummary {
    pub n_pos: usize,
    pub n_neg: usize,
    pub n_zero_excluded: usize,
    pub runs: usize,
    pub mu: f64,
    pub sigma: f64,
    pub z: f64,
    pub p_two_sided: f64,
    pub reject_at_5pct: bool,
}

/// Counts maximal same-sign blocks after applying the zero policy.
pub fn count_runs(signs: &[ChangeSign], policy: ZeroPolicy) -> Result<RunCounts> {
    let mut effective: Vec<ChangeSign> = Vec::with_capacity(signs.len());
    let mut n_zero_excluded = 0usize;
    for &s in signs {
        match s {
            ChangeSign::Up | ChangeSign::Down => effective.push(s),
            ChangeSign::Zero => match policy {
                ZeroPolicy::Exclude => n_zero_excluded += 1,
                ZeroPolicy::TreatAsPrevious => match effective.last() {
                    Some(&prev) => effective.push(prev),
                    None => n_zero_excluded += 1,
                },
            },
        }
    }
    if effective.is_empty() {
        return Err(EmhError::EmptySigns);
    }
    let runs = 1 + effective.windows(2).filter(|w| w[0] != w[1]).count();
    let n_pos = effective.iter().filter(|&&s| s == ChangeSign::Up).count();
    let n_neg = effective.len() - n_pos;
    Ok(RunCounts {
        runs,
        n_pos,
        n_neg,
        n_zero_excluded,
    })
}

/// Null mean and standard deviation of the run count.
pub fn runs_moments(n_pos: usize, n_neg: usize) -> Result<(f64, f64)> {
    if n_pos == 0 || n_neg == 0 || n_pos + n_neg < 3 {
        return Err(EmhError::DegenerateSigns { n_pos, n_neg });
    }
    let a = n_pos as f64;
    let b = n_neg as f64;
    let n = a + b;
    let mu = 2.0 * a * b / n + 1.0;
    let var = 2.0 * a * b * (2.0 * a * b - n) / (n * n * (n - 1.0));
    Ok((mu, var.sqrt()))
}

/// Standardized run count.
pub fn runs_z(runs: usize, mu: f64, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(EmhError::ZeroSigma);
    }
    Ok((runs as f64 - mu) / sigma)
}

/// Runs test on an explicit sign sequence.
pub fn runs_test_signs(signs: &[ChangeSign], policy: ZeroPolicy) -> Result<RunsSummary> {
    let counts = count_runs(signs, policy)?;
    let (mu, sigma) = runs_moments(counts.n_pos, counts.n_neg)?;
    let z = runs_z(counts.runs, mu, sigma)?;
    let p_two_sided = two_sided_p(z, NullDistribution::Normal)?.value();
    Ok(RunsSummary {
        n_pos: counts.n_pos,
        n_neg: counts.n_neg,
        n_zero_excluded: counts.n_zero_excluded,
        runs: counts.runs,
        mu,
        sigma,
        z,
        p_two_sided,
        reject_at_5pct: z.abs() > 1.96,
    })
}

/// Runs test on the signs of a price series' day-to-day changes.
pub fn runs_test(series: &PriceSeries, policy: ZeroPolicy) -> Result<RunsSummary> {
    runs_test_signs(&series.diff_signs(), policy)
}
