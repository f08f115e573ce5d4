//! Autoregression on levels: `y_t = c + b_1 y_{t-1} + ... + b_p y_{t-p}`,
//! fitted by ordinary least squares.
//!
//! The solver uses a Householder QR of the design matrix rather than the
//! normal equations: level data in the tens of thousands with
//! near-collinear lag columns squares the condition number under X'X,
//! which costs half the available digits. Coefficient covariance is
//! `s^2 (X'X)^{-1}` recovered from the R factor.

use serde::{Deserialize, Serialize};

use crate::dist::{two_sided_p, NullDistribution};
use crate::error::{EmhError, Result};
use crate::series::{lag_align, PriceSeries};

/// Order and intercept choice for an AR fit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArSpec {
    pub lags: usize,
    pub include_intercept: bool,
}

impl Default for ArSpec {
    /// Two lags with an intercept, the order used throughout the reports.
    fn default() -> Self {
        Self {
            lags: 2,
            include_intercept: true,
        }
    }
}

impl ArSpec {
    pub fn with_lags(lags: usize) -> Self {
        Self {
            lags,
            include_intercept: true,
        }
    }
}

/// Response and regressor columns for conditional least squares: the first
/// `lags` observations are dropped, and row `i` of lag column `j` holds the
/// value `j` steps before the response at row `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct DesignMatrix {
    pub names: Vec<String>,
    pub columns: Vec<Vec<f64>>,
    pub response: Vec<f64>,
}

impl DesignMatrix {
    pub fn n_rows(&self) -> usize {
        self.response.len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }
}

/// One fitted coefficient. `t` and `p_value` are `None` on perfect fits
/// (zero residual variance), where the sampling distribution degenerates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub name: String,
    pub estimate: f64,
    pub se: f64,
    pub t: Option<f64>,
    pub p_value: Option<f64>,
}

/// Fitted autoregression with the usual regression statistics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArFit {
    pub spec: ArSpec,
    pub n_used: usize,
    pub coefficients: Vec<Coefficient>,
    pub r_squared: f64,
    pub adj_r_squared: f64,
    pub residual_variance: f64,
}

impl ArFit {
    /// Coefficients for the lag terms, skipping any intercept.
    pub fn lag_coefficients(&self) -> &[Coefficient] {
        if self.spec.include_intercept {
            &self.coefficients[1..]
        } else {
            &self.coefficients
        }
    }
}

/// Raw least-squares output consumed by [`ar_fit`].
#[derive(Clone, Debug, PartialEq)]
pub struct OlsFit {
    pub estimates: Vec<f64>,
    pub standard_errors: Vec<f64>,
    pub residuals: Vec<f64>,
    pub rss: f64,
    pub df: usize,
    pub residual_variance: f64,
    pub perfect_fit: bool,
}

/// Builds the conditional-least-squares design for `spec.lags` lags.
pub fn build_design(values: &[f64], spec: &ArSpec) -> Result<DesignMatrix> {
    let n = values.len();
    let p = spec.lags;
    if p == 0 {
        return Err(EmhError::NoLagsRequested);
    }
    if n <= p + 1 {
        return Err(EmhError::SeriesTooShortForLags { n, lags: p });
    }
    let rows = n - p;
    let mut names = Vec::new();
    let mut columns = Vec::new();
    if spec.include_intercept {
        names.push("Intercept".to_string());
        columns.push(vec![1.0; rows]);
    }
    let (response, _) = lag_align(values, p)?;
    for j in 1..=p {
        // align to lag j, then drop leading rows so every column has `rows` entries
        let (_, lagged) = lag_align(values, j)?;
        names.push(format!("Lag {j}"));
        columns.push(lagged[p - j..].to_vec());
    }
    Ok(DesignMatrix {
        names,
        columns,
        response,
    })
}

/// Ordinary least squares via Householder QR.
pub fn ols_fit(design: &DesignMatrix) -> Result<OlsFit> {
    let m = design.n_rows();
    let k = design.n_cols();
    if m <= k {
        return Err(EmhError::NoDegreesOfFreedom);
    }

    let mut a = design.columns.clone();
    let mut qty = design.response.clone();
    let original_norms: Vec<f64> = a
        .iter()
        .map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect();

    let mut r = vec![vec![0.0f64; k]; k];
    let mut v = vec![0.0f64; m];
    for j in 0..k {
        let norm: f64 = a[j][j..].iter().map(|x| x * x).sum::<f64>().sqrt();
        let tol = 64.0 * f64::EPSILON * (m as f64).sqrt() * original_norms[j].max(f64::MIN_POSITIVE);
        if norm <= tol {
            return Err(EmhError::RankDeficient { column: j });
        }
        let alpha = if a[j][j] >= 0.0 { -norm } else { norm };
        v[j..m].copy_from_slice(&a[j][j..m]);
        v[j] -= alpha;
        let v_norm2: f64 = v[j..].iter().map(|x| x * x).sum();
        if v_norm2 > 0.0 {
            for col in (j + 1)..k {
                let dot: f64 = (j..m).map(|i| v[i] * a[col][i]).sum();
                let f = 2.0 * dot / v_norm2;
                for i in j..m {
                    a[col][i] -= f * v[i];
                }
            }
            let dot: f64 = (j..m).map(|i| v[i] * qty[i]).sum();
            let f = 2.0 * dot / v_norm2;
            for i in j..m {
                qty[i] -= f * v[i];
            }
        }
        r[j][j] = alpha;
        for col in (j + 1)..k {
            r[j][col] = a[col][j];
        }
    }

    // back-substitution for the estimates
    let mut estimates = vec![0.0f64; k];
    for i in (0..k).rev() {
        let mut s = qty[i];
        for l in (i + 1)..k {
            s -= r[i][l] * estimates[l];
        }
        estimates[i] = s / r[i][i];
    }

    let residuals: Vec<f64> = (0..m)
        .map(|i| {
            let fitted: f64 = (0..k).map(|j| design.columns[j][i] * estimates[j]).sum();
            design.response[i] - fitted
        })
        .collect();
    let rss: f64 = qty[k..].iter().map(|x| x * x).sum();
    let df = m - k;

    let y_norm2: f64 = design.response.iter().map(|y| y * y).sum();
    let perfect_fit = rss <= y_norm2 * 1e-24;
    let (rss, residual_variance) = if perfect_fit {
        (0.0, 0.0)
    } else {
        (rss, rss / df as f64)
    };

    // diag of (X'X)^{-1} = diag of R^{-1} R^{-T}
    let r_inv = invert_upper(&r);
    let standard_errors: Vec<f64> = (0..k)
        .map(|j| {
            if perfect_fit {
                0.0
            } else {
                let cov_jj: f64 = (j..k).map(|l| r_inv[j][l] * r_inv[j][l]).sum();
                (residual_variance * cov_jj).sqrt()
            }
        })
        .collect();

    Ok(OlsFit {
        estimates,
        standard_errors,
        residuals,
        rss,
        df,
        residual_variance,
        perfect_fit,
    })
}

fn invert_upper(r: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let k = r.len();
    let mut inv = vec![vec![0.0f64; k]; k];
    for col in 0..k {
        for i in (0..=col).rev() {
            let mut s = if i == col { 1.0 } else { 0.0 };
            for l in (i + 1)..=col {
                s -= r[i][l] * inv[l][col];
            }
            inv[i][col] = s / r[i][i];
        }
    }
    inv
}

/// Fits an autoregression to a price series' closing levels.
pub fn ar_fit(series: &PriceSeries, spec: &ArSpec) -> Result<ArFit> {
    ar_fit_values(&series.closes(), spec)
}

/// Fits an autoregression to a raw value sequence.
pub fn ar_fit_values(values: &[f64], spec: &ArSpec) -> Result<ArFit> {
    let design = build_design(values, spec)?;
    let ols = ols_fit(&design)?;
    let n_used = design.n_rows();

    // total sum of squares: centered when the model has an intercept
    let tss = if spec.include_intercept {
        let mean = design.response.iter().sum::<f64>() / n_used as f64;
        design
            .response
            .iter()
            .map(|y| (y - mean) * (y - mean))
            .sum::<f64>()
    } else {
        design.response.iter().map(|y| y * y).sum::<f64>()
    };
    let r_squared = if tss > 0.0 {
        (1.0 - ols.rss / tss).clamp(0.0, 1.0)
    } else if ols.perfect_fit {
        1.0
    } else {
        0.0
    };
    let centered = if spec.include_intercept { 1 } else { 0 };
    let adj_r_squared = 1.0
        - (1.0 - r_squared) * (n_used - centered) as f64 / (n_used - design.n_cols()) as f64;

    let coefficients = design
        .names
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let estimate = ols.estimates[j];
            let se = ols.standard_errors[j];
            let (t, p_value) = if ols.perfect_fit || !(se > 0.0) {
                (None, None)
            } else {
                let t = estimate / se;
                let p = two_sided_p(t, NullDistribution::StudentT { df: ols.df })
                    .map(|p| p.value())
                    .ok();
                (Some(t), p)
            };
            Coefficient {
                name: name.clone(),
                estimate,
                se,
                t,
                p_value,
            }
        })
        .collect();

    Ok(ArFit {
        spec: *spec,
        n_used,
        coefficients,
        r_squared,
        adj_r_squared,
        residual_variance: ols.residual_variance,
    })
}
