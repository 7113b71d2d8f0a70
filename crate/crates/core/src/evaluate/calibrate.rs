//! Empirical truncation study: how closely `F(1+it; Y)` tracks `F(1+it)`.
//!
//! This is a measurement, not a verification of any asymptotic rate. The
//! product on the line does not converge absolutely, and the deviations
//! are reported as observed.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lfamily::{LFunctionModel, ModelSpec};
use crate::real::Real;

use super::{dirichlet_direct, zeta_em, LineProduct, MAX_ABS_T};

/// Label attached to every calibration report.
pub const CALIBRATION_NOTE: &str =
    "empirical truncation study; stands in for a zero-free-region argument and asserts no rate";

/// Largest number of samples per study.
pub const MAX_SAMPLES: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationStats<T> {
    pub model: String,
    pub t_min: T,
    pub t_max: T,
    #[serde(rename = "Y")]
    pub y: T,
    pub sample_count: usize,
    pub seed: u64,
    pub samples: Vec<T>,
    pub deviations: Vec<T>,
    pub median: T,
    pub mean: T,
    pub max: T,
    pub note: &'static str,
}

/// Sample points for a study.
///
/// A ChaCha8 stream keyed by `seed` (via `seed_from_u64`) yields one `f64`
/// per sample, uniform on `[0, 1)` with 53 random bits; sample `i` is
/// `t_min + (t_max - t_min) u_i`. The stream is counter-based, so the points
/// depend only on `seed` and `i`.
pub fn sample_points(t_range: (f64, f64), count: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, b) = t_range;
    (0..count).map(|_| a + (b - a) * rng.gen::<f64>()).collect()
}

/// `F(1+it)` by the direct oracle of the model.
pub fn direct_value<T: Real>(model: &LFunctionModel<T>, t: T) -> Result<Complex<T>> {
    let s = Complex::new(T::one(), t);
    match model.spec() {
        ModelSpec::Zeta { power } => Ok(zeta_em(s)?.powu(power)),
        ModelSpec::Dedekind { d } => Ok(zeta_em(s)? * dirichlet_direct(d, t)?),
        ModelSpec::RsDelta { .. } => Err(Error::UnsupportedModel {
            model: model.label().to_string(),
            reason: "no independent evaluation of F(1+it) is available".to_string(),
        }),
    }
}

fn median<T: Real>(values: &[T]) -> T {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite deviations"));
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / T::lit(2.0)
    }
}

pub fn calibrate_truncation<T: Real>(
    model: &LFunctionModel<T>,
    t_range: (f64, f64),
    y: f64,
    sample_count: usize,
    seed: u64,
) -> Result<CalibrationStats<T>> {
    if !model.has_direct_oracle() {
        direct_value(model, T::one())?;
    }
    if sample_count == 0 {
        return Err(Error::domain("sample_count must be at least 1"));
    }
    if sample_count > MAX_SAMPLES {
        return Err(Error::resource("samples", sample_count, MAX_SAMPLES));
    }
    let (a, b) = t_range;
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(Error::domain(format!("invalid t range [{a}, {b}]")));
    }
    if a.abs().max(b.abs()) > MAX_ABS_T {
        return Err(Error::resource("t", a.abs().max(b.abs()), MAX_ABS_T));
    }
    let line = LineProduct::new(model, y)?;
    let samples: Vec<T> = sample_points(t_range, sample_count, seed).into_iter().map(T::lit).collect();
    let deviations: Vec<T> = samples
        .par_iter()
        .map(|&t| {
            let direct = direct_value(model, t)?;
            let truncated = line.value(t)?;
            let dev = (truncated / direct - Complex::new(T::one(), T::zero())).norm();
            if !dev.is_finite() {
                return Err(Error::NumericFailure(format!("non-finite deviation at t={t}")));
            }
            Ok(dev)
        })
        .collect::<Result<_>>()?;
    let n = T::from_usize(sample_count).unwrap();
    let mean = deviations.iter().fold(T::zero(), |s, &d| s + d) / n;
    let max = deviations.iter().fold(T::zero(), |m, &d| m.max(d));
    Ok(CalibrationStats {
        model: model.label().to_string(),
        t_min: T::lit(a),
        t_max: T::lit(b),
        y: T::lit(y),
        sample_count,
        seed,
        median: median(&deviations),
        mean,
        max,
        samples,
        deviations,
        note: CALIBRATION_NOTE,
    })
}
