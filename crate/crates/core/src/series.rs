//! Canonical price series: validated, date-ordered daily closing values.

use chrono::NaiveDate;

use crate::error::{EmhError, Result};

/// Smallest series any of the tests can run on.
pub const MIN_SERIES_LEN: usize = 3;

/// One dated closing value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PricePoint {
    pub date: NaiveDate,
    pub close: f64,
}

/// Direction of a day-over-day change.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChangeSign {
    Up,
    Down,
    Zero,
}

impl ChangeSign {
    /// Sign of a value: `Up` if positive, `Down` if negative, `Zero` if exactly zero.
    pub fn of(value: f64) -> Self {
        if value > 0.0 {
            ChangeSign::Up
        } else if value < 0.0 {
            ChangeSign::Down
        } else {
            ChangeSign::Zero
        }
    }
}

/// A labelled, strictly date-ordered sequence of daily closes.
///
/// Real series require every close to be strictly positive. Series produced
/// by the simulator are flagged synthetic and only require closes to be
/// finite and nonzero, since test-oracle processes may wander negative.
#[derive(Clone, Debug, PartialEq)]
pub struct PriceSeries {
    label: String,
    points: Vec<PricePoint>,
    synthetic: bool,
}

impl PriceSeries {
    /// Builds a real price series, enforcing positivity and date order.
    pub fn new(label: impl Into<String>, points: Vec<PricePoint>) -> Result<Self> {
        Self::build(label.into(), points, false)
    }

    /// Builds a synthetic series (simulator output); closes may be negative.
    pub fn synthetic(label: impl Into<String>, points: Vec<PricePoint>) -> Result<Self> {
        Self::build(label.into(), points, true)
    }

    fn build(label: String, points: Vec<PricePoint>, synthetic: bool) -> Result<Self> {
        if points.len() < MIN_SERIES_LEN {
            return Err(EmhError::TooShort {
                label,
                n: points.len(),
                min: MIN_SERIES_LEN,
            });
        }
        for p in &points {
            if synthetic {
                if !p.close.is_finite() || p.close == 0.0 {
                    return Err(EmhError::InvalidSyntheticClose {
                        date: p.date,
                        value: p.close,
                    });
                }
            } else if !p.close.is_finite() || p.close <= 0.0 {
                return Err(EmhError::NonPositiveClose {
                    date: p.date,
                    value: p.close,
                });
            }
        }
        for (i, w) in points.windows(2).enumerate() {
            if w[1].date <= w[0].date {
                return Err(EmhError::UnorderedDates { index: i + 1 });
            }
        }
        Ok(Self {
            label,
            points,
            synthetic,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn points(&self) -> &[PricePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_synthetic(&self) -> bool {
        self.synthetic
    }

    pub fn first_date(&self) -> NaiveDate {
        self.points[0].date
    }

    pub fn last_date(&self) -> NaiveDate {
        self.points[self.points.len() - 1].date
    }

    /// Closing values in date order.
    pub fn closes(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.close).collect()
    }

    /// Signs of consecutive changes; element `t` reflects `close[t+1] - close[t]`.
    pub fn diff_signs(&self) -> Vec<ChangeSign> {
        self.points
            .windows(2)
            .map(|w| ChangeSign::of(w[1].close - w[0].close))
            .collect()
    }

    /// Simple returns `close[t]/close[t-1] - 1`, length `n - 1`.
    pub fn returns(&self) -> Vec<f64> {
        self.points
            .windows(2)
            .map(|w| w[1].close / w[0].close - 1.0)
            .collect()
    }
}

/// Pairs each value with the value `lag` steps earlier.
///
/// Returns `(current, lagged)`, both of length `n - lag`, with
/// `current[i]` observed `lag` steps after `lagged[i]`.
pub fn lag_align(values: &[f64], lag: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = values.len();
    if lag == 0 || lag >= n {
        return Err(EmhError::LagOutOfRange { lag, n });
    }
    Ok((values[lag..].to_vec(), values[..n - lag].to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn series_from_closes(closes: &[f64]) -> PriceSeries {
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

    #[test]
    fn diff_signs_basic() {
        let s = series_from_closes(&[1.0, 2.0, 2.0, 1.0]);
        assert_eq!(
            s.diff_signs(),
            vec![ChangeSign::Up, ChangeSign::Zero, ChangeSign::Down]
        );
    }

    #[test]
    fn diff_signs_constant() {
        let s = series_from_closes(&[5.0, 5.0, 5.0]);
        assert_eq!(s.diff_signs(), vec![ChangeSign::Zero, ChangeSign::Zero]);
    }

    #[test]
    fn diff_signs_alternating() {
        let s = series_from_closes(&[1.0, 3.0, 2.0, 4.0, 1.0]);
        assert_eq!(
            s.diff_signs(),
            vec![
                ChangeSign::Up,
                ChangeSign::Down,
                ChangeSign::Up,
                ChangeSign::Down
            ]
        );
    }

    #[test]
    fn returns_examples() {
        let s = series_from_closes(&[100.0, 110.0, 99.0]);
        let r = s.returns();
        assert!((r[0] - 0.10).abs() < 1e-12);
        assert!((r[1] + 0.10).abs() < 1e-12);

        let flat = series_from_closes(&[100.0, 100.0, 100.0]);
        assert_eq!(flat.returns(), vec![0.0, 0.0]);
    }

    #[test]
    fn lag_align_shift() {
        let v = [1.0, 2.0, 3.0, 4.0];
        let (cur, lagged) = lag_align(&v, 1).unwrap();
        assert_eq!(cur, vec![2.0, 3.0, 4.0]);
        assert_eq!(lagged, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn lag_align_max_lag() {
        let v = [1.0, 2.0, 3.0, 4.0];
        let (cur, lagged) = lag_align(&v, 3).unwrap();
        assert_eq!(cur, vec![4.0]);
        assert_eq!(lagged, vec![1.0]);
    }

    #[test]
    fn lag_align_out_of_range() {
        let v = [1.0, 2.0, 3.0];
        assert!(matches!(
            lag_align(&v, 3),
            Err(EmhError::LagOutOfRange { lag: 3, n: 3 })
        ));
        assert!(lag_align(&v, 0).is_err());
    }

    #[test]
    fn rejects_short_and_nonpositive() {
        let start = NaiveDate::from_ymd_opt(2020, 1, 1).unwrap();
        let two = vec![
            PricePoint {
                date: start,
                close: 1.0,
            },
            PricePoint {
                date: start + chrono::Days::new(1),
                close: 2.0,
            },
        ];
        assert!(matches!(
            PriceSeries::new("x", two),
            Err(EmhError::TooShort { .. })
        ));

        let bad = vec![
            PricePoint {
                date: start,
                close: 1.0,
            },
            PricePoint {
                date: start + chrono::Days::new(1),
                close: -2.0,
            },
            PricePoint {
                date: start + chrono::Days::new(2),
                close: 3.0,
            },
        ];
        assert!(matches!(
            PriceSeries::new("x", bad.clone()),
            Err(EmhError::NonPositiveClose { .. })
        ));
        // the same closes are fine for a synthetic series
        assert!(PriceSeries::synthetic("x", bad).is_ok());
    }

    #[test]
    fn rejects_unordered_dates() {
        let start = NaiveDate::from_ymd_opt(2020, 1, 1).unwrap();
        let pts = vec![
            PricePoint {
                date: start + chrono::Days::new(1),
                close: 1.0,
            },
            PricePoint {
                date: start,
                close: 2.0,
            },
            PricePoint {
                date: start + chrono::Days::new(2),
                close: 3.0,
            },
        ];
        assert!(matches!(
            PriceSeries::new("x", pts),
            Err(EmhError::UnorderedDates { index: 1 })
        ));
    }
}
