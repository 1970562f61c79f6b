//! Atkinson index and the generalized-entropy family.

use crate::error::{Error, Result};
use crate::micro::IncomeSample;

/// Distance from a removable singularity below which the closed-form limit
/// is used instead of the general formula.
pub const SINGULARITY_WINDOW: f64 = 1e-9;

/// Inequality aversion, `epsilon >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct AversionParam(f64);

impl AversionParam {
    pub fn new(epsilon: f64) -> Result<Self> {
        if epsilon.is_finite() && epsilon >= 0.0 {
            Ok(Self(epsilon))
        } else {
            Err(Error::Domain(format!("inequality aversion {epsilon} must be finite and >= 0")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Generalized-entropy order; any finite real.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EntropyOrder(f64);

impl EntropyOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() {
            Ok(Self(alpha))
        } else {
            Err(Error::Domain(format!("entropy order {alpha} must be finite")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Atkinson index `1 - y_ede / mean`.
///
/// With a zero value and `epsilon >= 1` the equally distributed equivalent
/// income is zero and the index is exactly 1.
pub fn atkinson(sample: &IncomeSample, eps: AversionParam) -> f64 {
    let eps = eps.value();
    if eps >= 1.0 && sample.has_zero() {
        return 1.0;
    }
    let mean = sample.mean();
    let n = sample.len() as f64;
    let ede_over_mean = if (eps - 1.0).abs() < SINGULARITY_WINDOW {
        let mean_log = sample.values().iter().map(|&y| (y / mean).ln()).sum::<f64>() / n;
        mean_log.exp()
    } else {
        let power = 1.0 - eps;
        let moment = sample.values().iter().map(|&y| (y / mean).powf(power)).sum::<f64>() / n;
        moment.powf(1.0 / power)
    };
    (1.0 - ede_over_mean).clamp(0.0, 1.0)
}

/// Generalized entropy `GE(alpha)`. Orders within [`SINGULARITY_WINDOW`] of
/// 0 or 1 dispatch to [`ge_zero`] and [`theil`].
pub fn ge_index(sample: &IncomeSample, order: EntropyOrder) -> Result<f64> {
    let alpha = order.value();
    if alpha.abs() < SINGULARITY_WINDOW {
        return ge_zero(sample);
    }
    if (alpha - 1.0).abs() < SINGULARITY_WINDOW {
        return Ok(theil(sample));
    }
    if alpha < 0.0 && sample.has_zero() {
        return Err(Error::ZeroIncome(format!("GE({alpha}) is undefined with zero values")));
    }
    let mean = sample.mean();
    let n = sample.len() as f64;
    let moment = sample.values().iter().map(|&y| (y / mean).powf(alpha)).sum::<f64>() / n;
    Ok(((moment - 1.0) / (alpha * (alpha - 1.0))).max(0.0))
}

/// Mean logarithmic deviation, `GE(0)`.
pub fn ge_zero(sample: &IncomeSample) -> Result<f64> {
    if sample.has_zero() {
        return Err(Error::ZeroIncome("mean log deviation is undefined with zero values".into()));
    }
    let mean = sample.mean();
    let n = sample.len() as f64;
    Ok((sample.values().iter().map(|&y| (mean / y).ln()).sum::<f64>() / n).max(0.0))
}

/// Theil index, `GE(1)`. Zero values contribute nothing.
pub fn theil(sample: &IncomeSample) -> f64 {
    let mean = sample.mean();
    let n = sample.len() as f64;
    let sum: f64 = sample
        .values()
        .iter()
        .filter(|&&y| y > 0.0)
        .map(|&y| {
            let r = y / mean;
            r * r.ln()
        })
        .sum();
    (sum / n).max(0.0)
}
