//! Shared test oracles, all deliberately independent of the library's
//! implementation paths: the ACF oracle recomputes the estimator with
//! plain loops, least squares is cross-checked by normal equations and by
//! a derivative-free grid-refinement minimizer, and the normal CDF oracle
//! evaluates the no-cancellation erf series to near machine precision.

use chrono::NaiveDate;
use emh_core::{PricePoint, PriceSeries};

#[allow(dead_code)]
pub fn series_from_closes(closes: &[f64]) -> PriceSeries {
    let start = NaiveDate::from_ymd_opt(2010, 4, 1).unwrap();
    let points = closes
        .iter()
        .enumerate()
        .map(|(i, &c)| PricePoint {
            date: start + chrono::Days::new(i as u64),
            close: c,
        })
        .collect();
    PriceSeries::new("test", points).unwrap()
}

/// Brute-force ACF(k): recompute the mean, numerator, and denominator with
/// explicit loops.
#[allow(dead_code)]
pub fn acf_oracle(values: &[f64], lag: usize) -> f64 {
    let n = values.len();
    let mut sum = 0.0;
    for &v in values {
        sum += v;
    }
    let mean = sum / n as f64;
    let mut numer = 0.0;
    for t in lag..n {
        numer += (values[t] - mean) * (values[t - lag] - mean);
    }
    let mut denom = 0.0;
    for &v in values {
        denom += (v - mean) * (v - mean);
    }
    numer / denom
}

/// Least squares by the normal equations with partial-pivot elimination.
#[allow(dead_code)]
pub fn normal_equations_solve(columns: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let k = columns.len();
    let mut a = vec![vec![0.0f64; k + 1]; k];
    for i in 0..k {
        for j in 0..k {
            a[i][j] = dot(&columns[i], &columns[j]);
        }
        a[i][k] = dot(&columns[i], y);
    }
    // gaussian elimination, partial pivoting
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        for row in (col + 1)..k {
            let f = a[row][col] / a[col][col];
            for j in col..=k {
                a[row][j] -= f * a[col][j];
            }
        }
    }
    let mut beta = vec![0.0f64; k];
    for i in (0..k).rev() {
        let mut s = a[i][k];
        for j in (i + 1)..k {
            s -= a[i][j] * beta[j];
        }
        beta[i] = s / a[i][i];
    }
    beta
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[allow(dead_code)]
pub fn rss(columns: &[Vec<f64>], y: &[f64], beta: &[f64]) -> f64 {
    let mut total = 0.0;
    for i in 0..y.len() {
        let fitted: f64 = columns.iter().zip(beta).map(|(c, b)| c[i] * b).sum();
        let r = y[i] - fitted;
        total += r * r;
    }
    total
}

/// Derivative-free RSS minimizer: repeatedly evaluate a 5-point grid per
/// coordinate over a shrinking box centered on the best point so far.
/// Convex objective, so the refinement homes in on the least-squares
/// solution without any linear algebra.
#[allow(dead_code)]
pub fn grid_refine_ols(columns: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    const POINTS: usize = 5;
    let k = columns.len();
    let mut center = vec![0.0f64; k];
    let mut half = 10.0f64;
    let mut best = rss(columns, y, &center);
    for _ in 0..120 {
        let mut improved_center = center.clone();
        let total = POINTS.pow(k as u32);
        for idx in 0..total {
            let mut candidate = vec![0.0f64; k];
            let mut rem = idx;
            for c in 0..k {
                let step = rem % POINTS;
                rem /= POINTS;
                candidate[c] = center[c] + (step as f64 - (POINTS as f64 - 1.0) / 2.0) * half / 2.0;
            }
            let value = rss(columns, y, &candidate);
            if value < best {
                best = value;
                improved_center = candidate;
            }
        }
        center = improved_center;
        half *= 0.6;
    }
    center
}

/// High-precision standard normal CDF through the all-positive-terms erf
/// series `erf(x) = 2/sqrt(pi) * x * exp(-x^2) * sum 2^n x^(2n) / (2n+1)!!`.
#[allow(dead_code)]
pub fn phi_oracle(x: f64) -> f64 {
    let y = x.abs() / std::f64::consts::SQRT_2;
    let mut term = y;
    let mut sum = y;
    let mut n = 0u32;
    while term > sum * 1e-18 && n < 2000 {
        n += 1;
        term *= 2.0 * y * y / (2.0 * n as f64 + 1.0);
        sum += term;
    }
    let erf = 2.0 / std::f64::consts::PI.sqrt() * sum * (-y * y).exp();
    let upper = 0.5 * (1.0 + erf);
    if x >= 0.0 {
        upper
    } else {
        1.0 - upper
    }
}
