//! Lorenz curves, the Gini coefficient and quantile shares computed from
//! micro-data (one value per unit).
//!
//! Quantile shares use the piecewise-linear Lorenz curve: when a quantile
//! boundary falls inside an observation, that observation is split
//! proportionally between the two sides.

use crate::composite::ShareRatio;
use crate::error::{Error, Result};

/// Non-negative values held in ascending order, with a positive total.
#[derive(Debug, Clone, PartialEq)]
pub struct IncomeSample {
    values: Vec<f64>,
    // cumulative[k] = sum of the k smallest values; cumulative[n] == total
    cumulative: Vec<f64>,
}

impl IncomeSample {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::DegenerateSample("sample has no values".into()));
        }
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidValue { index, value });
            }
        }
        values.sort_by(f64::total_cmp);

        let mut cumulative = Vec::with_capacity(values.len() + 1);
        let mut running = 0.0;
        cumulative.push(running);
        for &v in &values {
            running += v;
            cumulative.push(running);
        }
        if running <= 0.0 {
            return Err(Error::DegenerateSample("all values are zero".into()));
        }
        Ok(Self { values, cumulative })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false: construction rejects empty samples.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.cumulative[self.values.len()]
    }

    pub fn mean(&self) -> f64 {
        self.total() / self.len() as f64
    }

    pub fn has_zero(&self) -> bool {
        self.values[0] == 0.0
    }

    /// Income share of the poorest `rank` units, `rank` in `[0, n]` and
    /// possibly fractional.
    fn share_below_rank(&self, rank: f64) -> f64 {
        let n = self.len();
        let rank = rank.clamp(0.0, n as f64);
        let whole = rank.floor() as usize;
        if whole >= n {
            return 1.0;
        }
        let frac = rank - whole as f64;
        (self.cumulative[whole] + frac * self.values[whole]) / self.total()
    }

    /// Lorenz ordinate at population share `p` in `[0, 1]`.
    pub fn lorenz_at(&self, p: f64) -> f64 {
        self.share_below_rank(p * self.len() as f64)
    }
}

/// Piecewise-linear Lorenz curve from `(0, 0)` to `(1, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LorenzCurve {
    points: Vec<(f64, f64)>,
}

impl LorenzCurve {
    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Linear interpolation between the curve's vertices.
    pub fn eval(&self, p: f64) -> f64 {
        let p = p.clamp(0.0, 1.0);
        let idx = self.points.partition_point(|&(x, _)| x < p);
        if idx == 0 {
            return self.points[0].1;
        }
        let (x1, y1) = self.points[idx];
        let (x0, y0) = self.points[idx - 1];
        y0 + (y1 - y0) * (p - x0) / (x1 - x0)
    }

    /// Trapezoidal area under the curve.
    pub fn area(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / 2.0)
            .sum()
    }
}

pub fn lorenz_curve(sample: &IncomeSample) -> LorenzCurve {
    let n = sample.len();
    let total = sample.total();
    let points = (0..=n)
        .map(|k| (k as f64 / n as f64, sample.cumulative[k] / total))
        .collect();
    LorenzCurve { points }
}

/// Gini coefficient as one minus twice the area under the Lorenz curve
/// (population form, no small-sample correction).
pub fn gini(sample: &IncomeSample) -> f64 {
    (1.0 - 2.0 * lorenz_curve(sample).area()).clamp(0.0, 1.0)
}

fn check_percent(x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 && x <= 50.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("quantile percent {x} outside (0, 50]")))
    }
}

/// Income share held by the poorest `x` percent, `x` in `(0, 50]`.
pub fn bottom_share(sample: &IncomeSample, x: f64) -> Result<f64> {
    check_percent(x)?;
    Ok(sample.share_below_rank(x * sample.len() as f64 / 100.0))
}

/// Income share held by the richest `x` percent, `x` in `(0, 50]`.
pub fn top_share(sample: &IncomeSample, x: f64) -> Result<f64> {
    check_percent(x)?;
    let n = sample.len() as f64;
    Ok(1.0 - sample.share_below_rank(n - x * n / 100.0))
}

/// Bottom-`x`% share over top-`x`% share. Zero when the bottom holds nothing.
pub fn ratio_b_over_t(sample: &IncomeSample, x: f64) -> Result<ShareRatio> {
    let bottom = bottom_share(sample, x)?;
    let top = top_share(sample, x)?;
    ShareRatio::from_shares(bottom, top)
}

/// Top 10% share over bottom 40% share.
pub fn palma_ratio(sample: &IncomeSample) -> Result<f64> {
    let bottom40 = bottom_share(sample, 40.0)?;
    if bottom40 <= 0.0 {
        return Err(Error::DivisionByZeroShare("palma (bottom 40% share)".into()));
    }
    Ok(top_share(sample, 10.0)? / bottom40)
}
