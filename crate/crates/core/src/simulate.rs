//! Deterministic synthetic series used as verification oracles.
//!
//! Reproducibility contract: the generator is fully specified here so that
//! a seed reproduces the same series in any implementation.
//!
//! * Raw stream: splitmix64. State advances by `0x9E3779B97F4A7C15`; the
//!   output mix is `z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
//!   z *= 0x94D049BB133111EB; z ^= z >> 31`.
//! * Uniforms: `((word >> 11) + 0.5) * 2^-53`, strictly inside (0, 1).
//! * Normals: Box-Muller on consecutive uniform pairs,
//!   `r = sqrt(-2 ln u1)`, returning `r cos(2 pi u2)` first and caching
//!   `r sin(2 pi u2)` for the next draw.
//!
//! Dates are consecutive business days (weekends skipped, no holiday
//! calendar) starting 2010-04-01.

use chrono::{Datelike, NaiveDate, Weekday};
use serde::{Deserialize, Serialize};

use crate::error::{EmhError, Result};
use crate::series::{PricePoint, PriceSeries, MIN_SERIES_LEN};

/// First synthetic trading day.
pub const SYNTHETIC_START: (i32, u32, u32) = (2010, 4, 1);

/// splitmix64 pseudo-random stream.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw strictly inside (0, 1).
    pub fn next_f64(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }
}

/// Standard normal draws via Box-Muller over [`SplitMix64`].
#[derive(Clone, Debug)]
pub struct GaussianSource {
    rng: SplitMix64,
    spare: Option<f64>,
}

impl GaussianSource {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: SplitMix64::new(seed),
            spare: None,
        }
    }

    pub fn next(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.rng.next_f64();
        let u2 = self.rng.next_f64();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }
}

/// Process family to generate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    /// `y_t = y_{t-1} + drift + step_sd * e_t`
    RandomWalk { drift: f64, step_sd: f64 },
    /// `y_t = intercept + sum_j coefficients[j-1] * y_{t-j} + noise_sd * e_t`
    Ar {
        intercept: f64,
        coefficients: Vec<f64>,
        noise_sd: f64,
    },
    /// `y_t = sd * e_t`
    IidNoise { sd: f64 },
}

impl Model {
    /// Number of initial values the recurrence consumes.
    pub fn lag_order(&self) -> usize {
        match self {
            Model::RandomWalk { .. } => 1,
            Model::Ar { coefficients, .. } => coefficients.len(),
            Model::IidNoise { .. } => 0,
        }
    }
}

/// Everything needed to reproduce a synthetic series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationSpec {
    pub model: Model,
    pub n: usize,
    pub seed: u64,
    /// The first `lag_order` emitted values, oldest first.
    pub initial_values: Vec<f64>,
}

impl SimulationSpec {
    /// Spec with the default initial values (all 100).
    pub fn new(model: Model, n: usize, seed: u64) -> Self {
        let initial_values = vec![100.0; model.lag_order()];
        Self {
            model,
            n,
            seed,
            initial_values,
        }
    }

    fn validate(&self) -> Result<()> {
        let lag = self.model.lag_order();
        if self.n < MIN_SERIES_LEN || self.n < lag + 1 {
            return Err(EmhError::InvalidSimulationSpec(format!(
                "n = {} is too short (need at least {})",
                self.n,
                MIN_SERIES_LEN.max(lag + 1)
            )));
        }
        if self.initial_values.len() != lag {
            return Err(EmhError::InvalidSimulationSpec(format!(
                "{} initial values supplied, model consumes {lag}",
                self.initial_values.len()
            )));
        }
        if self.initial_values.iter().any(|v| !v.is_finite()) {
            return Err(EmhError::InvalidSimulationSpec(
                "initial values must be finite".to_string(),
            ));
        }
        let sd_ok = |sd: f64| sd.is_finite() && sd >= 0.0;
        match &self.model {
            Model::RandomWalk { drift, step_sd } => {
                if !drift.is_finite() || !sd_ok(*step_sd) {
                    return Err(EmhError::InvalidSimulationSpec(
                        "drift must be finite and step_sd nonnegative".to_string(),
                    ));
                }
            }
            Model::Ar {
                intercept,
                coefficients,
                noise_sd,
            } => {
                if coefficients.is_empty() {
                    return Err(EmhError::InvalidSimulationSpec(
                        "ar model needs at least one coefficient".to_string(),
                    ));
                }
                if !intercept.is_finite()
                    || !sd_ok(*noise_sd)
                    || coefficients.iter().any(|c| !c.is_finite())
                {
                    return Err(EmhError::InvalidSimulationSpec(
                        "ar parameters must be finite, noise_sd nonnegative".to_string(),
                    ));
                }
            }
            Model::IidNoise { sd } => {
                if !sd_ok(*sd) {
                    return Err(EmhError::InvalidSimulationSpec(
                        "sd must be finite and nonnegative".to_string(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Generates the series described by `spec`; identical specs (seed
/// included) produce identical series.
pub fn generate(spec: &SimulationSpec) -> Result<PriceSeries> {
    spec.validate()?;
    let mut noise = GaussianSource::new(spec.seed);
    let mut values = Vec::with_capacity(spec.n);
    values.extend_from_slice(&spec.initial_values);
    match &spec.model {
        Model::RandomWalk { drift, step_sd } => {
            for _ in values.len()..spec.n {
                let prev = values[values.len() - 1];
                values.push(prev + drift + step_sd * noise.next());
            }
        }
        Model::Ar {
            intercept,
            coefficients,
            noise_sd,
        } => {
            for t in values.len()..spec.n {
                let mut y = *intercept;
                for (j, c) in coefficients.iter().enumerate() {
                    y += c * values[t - 1 - j];
                }
                values.push(y + noise_sd * noise.next());
            }
        }
        Model::IidNoise { sd } => {
            for _ in 0..spec.n {
                values.push(sd * noise.next());
            }
        }
    }

    let mut date = NaiveDate::from_ymd_opt(SYNTHETIC_START.0, SYNTHETIC_START.1, SYNTHETIC_START.2)
        .expect("valid start date");
    let mut points = Vec::with_capacity(spec.n);
    for close in values {
        points.push(PricePoint { date, close });
        date = next_business_day(date);
    }
    let label = match spec.model {
        Model::RandomWalk { .. } => "random-walk",
        Model::Ar { .. } => "ar",
        Model::IidNoise { .. } => "iid-noise",
    };
    PriceSeries::synthetic(label, points)
}

fn next_business_day(mut d: NaiveDate) -> NaiveDate {
    loop {
        d = d.succ_opt().expect("date within range");
        if !matches!(d.weekday(), Weekday::Sat | Weekday::Sun) {
            return d;
        }
    }
}
