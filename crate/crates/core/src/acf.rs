//! Autocorrelation function, standard errors, and correlogram assembly.
//!
//! ACF(k) divides the lag-k sum of cross products of deviations from the
//! full-sample mean by the full-sample sum of squared deviations (the
//! standard biased estimator). The standard error is 1/sqrt(n - k)
//! exactly, or 1/sqrt(n) in the large-sample form used when n >= 50.
//!
//! Lags of a correlogram are independent, so with the `parallel` feature
//! they are evaluated across a rayon pool; per-lag arithmetic is identical
//! to the sequential path, so results match bit for bit.

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{EmhError, Result};
use crate::series::PriceSeries;

/// Which standard-error formula a correlogram uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeMode {
    /// Per-lag `1/sqrt(n - k)`.
    Exact,
    /// Single `1/sqrt(n)`, valid for n >= 50 (default; the form published
    /// reference tables use).
    #[default]
    LargeN,
}

/// One lag of a correlogram.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcfPoint {
    pub lag: usize,
    pub acf: f64,
    pub se: f64,
    pub t_stat: f64,
    pub significant_at_5pct: bool,
}

/// ACF values with standard errors for lags `1..=max_lag`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Correlogram {
    pub n: usize,
    pub max_lag: usize,
    pub se_mode: SeMode,
    pub points: Vec<AcfPoint>,
}

/// Autocorrelation of `values` at the given lag; lag 0 is exactly 1.
pub fn acf(values: &[f64], lag: usize) -> Result<f64> {
    let n = values.len();
    if lag >= n {
        return Err(EmhError::LagOutOfRange { lag, n });
    }
    let (mean, denom) = mean_and_denom(values)?;
    if lag == 0 {
        return Ok(1.0);
    }
    Ok(acf_with(values, mean, denom, lag))
}

/// Exact standard error of ACF(k): `1/sqrt(n - k)`.
pub fn acf_se_exact(n: usize, lag: usize) -> Result<f64> {
    if lag >= n {
        return Err(EmhError::LagOutOfRange { lag, n });
    }
    Ok(1.0 / ((n - lag) as f64).sqrt())
}

/// Large-sample standard error of ACF(k): `1/sqrt(n)`, requires n >= 50.
pub fn acf_se_approx(n: usize) -> Result<f64> {
    if n < 50 {
        return Err(EmhError::SampleTooSmall { n });
    }
    Ok(1.0 / (n as f64).sqrt())
}

/// Test statistic for ACF(k) against zero correlation.
pub fn acf_t(acf: f64, se: f64) -> Result<f64> {
    if !(se > 0.0) {
        return Err(EmhError::NonPositiveSe);
    }
    Ok(acf / se)
}

/// Correlogram of a price series over lags `1..=max_lag`.
pub fn correlogram(series: &PriceSeries, max_lag: usize, se_mode: SeMode) -> Result<Correlogram> {
    correlogram_values(&series.closes(), max_lag, se_mode)
}

/// Correlogram of a raw value sequence.
pub fn correlogram_values(values: &[f64], max_lag: usize, se_mode: SeMode) -> Result<Correlogram> {
    let setup = CorrelogramSetup::prepare(values, max_lag, se_mode)?;
    #[cfg(feature = "parallel")]
    let points = (1..=max_lag)
        .into_par_iter()
        .map(|lag| setup.point(values, lag))
        .collect::<Vec<_>>();
    #[cfg(not(feature = "parallel"))]
    let points = (1..=max_lag)
        .map(|lag| setup.point(values, lag))
        .collect::<Vec<_>>();
    Ok(setup.finish(points))
}

/// Sequential reference path for [`correlogram_values`]; the parallel path
/// must produce identical results.
pub fn correlogram_values_seq(
    values: &[f64],
    max_lag: usize,
    se_mode: SeMode,
) -> Result<Correlogram> {
    let setup = CorrelogramSetup::prepare(values, max_lag, se_mode)?;
    let points = (1..=max_lag)
        .map(|lag| setup.point(values, lag))
        .collect::<Vec<_>>();
    Ok(setup.finish(points))
}

struct CorrelogramSetup {
    n: usize,
    max_lag: usize,
    se_mode: SeMode,
    mean: f64,
    denom: f64,
    se_large_n: f64,
}

impl CorrelogramSetup {
    fn prepare(values: &[f64], max_lag: usize, se_mode: SeMode) -> Result<Self> {
        let n = values.len();
        if max_lag == 0 {
            return Err(EmhError::NoLagsRequested);
        }
        if max_lag >= n {
            return Err(EmhError::LagOutOfRange { lag: max_lag, n });
        }
        let (mean, denom) = mean_and_denom(values)?;
        let se_large_n = match se_mode {
            SeMode::LargeN => acf_se_approx(n)?,
            SeMode::Exact => 0.0,
        };
        Ok(Self {
            n,
            max_lag,
            se_mode,
            mean,
            denom,
            se_large_n,
        })
    }

    fn point(&self, values: &[f64], lag: usize) -> AcfPoint {
        let acf = acf_with(values, self.mean, self.denom, lag);
        let se = match self.se_mode {
            SeMode::Exact => 1.0 / ((self.n - lag) as f64).sqrt(),
            SeMode::LargeN => self.se_large_n,
        };
        let t_stat = acf / se;
        AcfPoint {
            lag,
            acf,
            se,
            t_stat,
            significant_at_5pct: t_stat.abs() > 1.96,
        }
    }

    fn finish(self, points: Vec<AcfPoint>) -> Correlogram {
        Correlogram {
            n: self.n,
            max_lag: self.max_lag,
            se_mode: self.se_mode,
            points,
        }
    }
}

fn mean_and_denom(values: &[f64]) -> Result<(f64, f64)> {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let denom: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    if denom == 0.0 {
        return Err(EmhError::ConstantSeries);
    }
    Ok((mean, denom))
}

fn acf_with(values: &[f64], mean: f64, denom: f64, lag: usize) -> f64 {
    let numer: f64 = values
        .windows(lag + 1)
        .map(|w| (w[lag] - mean) * (w[0] - mean))
        .sum();
    numer / denom
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::{generate, Model, SimulationSpec};

    #[test]
    fn acf_hand_example() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0];
        let r = acf(&v, 1).unwrap();
        assert!((r - 0.4).abs() < 1e-15);
    }

    #[test]
    fn acf_lag_zero_is_one() {
        let v = [3.0, 1.0, 4.0, 1.0, 5.0];
        assert_eq!(acf(&v, 0).unwrap(), 1.0);
    }

    #[test]
    fn acf_errors() {
        let v = [1.0, 2.0, 3.0];
        assert!(matches!(acf(&v, 3), Err(EmhError::LagOutOfRange { .. })));
        assert!(matches!(
            acf(&[2.0, 2.0, 2.0], 1),
            Err(EmhError::ConstantSeries)
        ));
    }

    #[test]
    fn acf_of_random_walk_levels_is_near_one() {
        let spec = SimulationSpec::new(
            Model::RandomWalk {
                drift: 0.0,
                step_sd: 1.0,
            },
            2212,
            11,
        );
        let series = generate(&spec).unwrap();
        let r = acf(&series.closes(), 1).unwrap();
        assert!(r > 0.99, "acf(1) = {r}");
    }

    #[test]
    fn se_exact_values() {
        assert!((acf_se_exact(101, 1).unwrap() - 0.1).abs() < 1e-15);
        assert!((acf_se_exact(2212, 20).unwrap() - 0.0213589).abs() < 1e-6);
        assert_eq!(acf_se_exact(5, 4).unwrap(), 1.0);
        assert!(acf_se_exact(5, 5).is_err());
    }

    #[test]
    fn se_approx_values() {
        assert!((acf_se_approx(2212).unwrap() - 0.0212622).abs() < 1e-6);
        assert!((acf_se_approx(100).unwrap() - 0.1).abs() < 1e-15);
        assert!(matches!(
            acf_se_approx(49),
            Err(EmhError::SampleTooSmall { n: 49 })
        ));
    }

    #[test]
    fn t_statistic() {
        assert!((acf_t(0.998, 0.021).unwrap() - 47.52).abs() < 0.01);
        assert_eq!(acf_t(0.0, 0.1).unwrap(), 0.0);
        assert_eq!(acf_t(0.4, 0.2).unwrap(), 2.0);
        assert!(matches!(acf_t(0.5, 0.0), Err(EmhError::NonPositiveSe)));
    }

    #[test]
    fn correlogram_shape_and_errors() {
        let v: Vec<f64> = (0..100).map(|i| (i as f64 * 0.7).sin()).collect();
        let c = correlogram_values(&v, 10, SeMode::LargeN).unwrap();
        assert_eq!(c.points.len(), 10);
        for (i, p) in c.points.iter().enumerate() {
            assert_eq!(p.lag, i + 1);
            assert_eq!(p.t_stat, p.acf / p.se);
            assert_eq!(p.significant_at_5pct, p.t_stat.abs() > 1.96);
        }
        assert!(matches!(
            correlogram_values(&v, 0, SeMode::LargeN),
            Err(EmhError::NoLagsRequested)
        ));
        assert!(matches!(
            correlogram_values(&v, 100, SeMode::LargeN),
            Err(EmhError::LagOutOfRange { .. })
        ));
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_matches_sequential() {
        let spec = SimulationSpec::new(
            Model::RandomWalk {
                drift: 0.1,
                step_sd: 2.0,
            },
            512,
            42,
        );
        let values = generate(&spec).unwrap().closes();
        let par = correlogram_values(&values, 100, SeMode::Exact).unwrap();
        let seq = correlogram_values_seq(&values, 100, SeMode::Exact).unwrap();
        assert_eq!(par, seq);
    }
}
