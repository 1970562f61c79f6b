//! Composite inequality index combining the Gini coefficient with a bounded
//! transform of the bottom/top share ratio.
//!
//! The tail term is `H = 1 - (B/T)^alpha`, where `B/T` is the income share of
//! the bottom decile over that of the top decile. The index is the Euclidean
//! norm of `(gini, H)` scaled into `[0, 1]`:
//!
//! ```text
//! I = sqrt(gini^2 + H^2) / sqrt(2)
//! ```
//!
//! The weight `alpha` defaults to 1/4. [`calibrate_alpha`] recovers the weight
//! that balances the two terms on a cross-section, and [`mean_alpha`] averages
//! calibrated weights across cross-sections.

use crate::error::{Error, Result};

/// Bottom share over top share, in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ShareRatio(f64);

impl ShareRatio {
    pub fn new(b_over_t: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&b_over_t) {
            Ok(Self(b_over_t))
        } else {
            Err(Error::Domain(format!("B/T ratio {b_over_t} outside [0, 1]")))
        }
    }

    /// From a top-over-bottom ratio as published in tables. `T/B` must be at
    /// least 1; `+inf` (empty bottom share) maps to 0.
    pub fn from_t_over_b(t_over_b: f64) -> Result<Self> {
        if t_over_b.is_nan() || t_over_b < 1.0 {
            return Err(Error::Domain(format!("T/B ratio {t_over_b} must be >= 1")));
        }
        Ok(Self(1.0 / t_over_b))
    }

    /// From a pair of shares. Zero bottom share gives ratio 0.
    pub fn from_shares(bottom: f64, top: f64) -> Result<Self> {
        if !(bottom.is_finite() && top.is_finite()) || bottom < 0.0 || top <= 0.0 {
            return Err(Error::Domain(format!("shares bottom={bottom}, top={top} are not valid")));
        }
        if bottom == 0.0 {
            return Ok(Self(0.0));
        }
        // rounding can push an equal split a hair above 1
        Ok(Self((bottom / top).min(1.0)))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Reciprocal `T/B`; infinite when the ratio is 0.
    pub fn t_over_b(self) -> f64 {
        if self.0 == 0.0 {
            f64::INFINITY
        } else {
            1.0 / self.0
        }
    }
}

/// Exponent on the share ratio, in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Weight(f64);

impl Weight {
    pub const QUARTER: Weight = Weight(0.25);

    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha <= 1.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::Domain(format!("weight {alpha} outside (0, 1]")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for Weight {
    fn default() -> Self {
        Self::QUARTER
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositeResult {
    pub gini: f64,
    pub ratio: ShareRatio,
    pub weight: Weight,
    pub h: f64,
    pub index_i: f64,
    /// Gini in points combined with raw `T/B`; see [`alternative_index`].
    pub alt_index: f64,
}

pub fn h_transform(ratio: ShareRatio, w: Weight) -> f64 {
    1.0 - ratio.value().powf(w.value())
}

/// Weight `alpha` solving `avg_gini = 1 - avg_ratio^alpha`.
pub fn calibrate_alpha(avg_gini: f64, avg_ratio: f64) -> Result<Weight> {
    if !(avg_gini > 0.0 && avg_gini < 1.0) {
        return Err(Error::CalibrationDomain(format!("average gini {avg_gini} outside (0, 1)")));
    }
    if !(avg_ratio > 0.0 && avg_ratio < 1.0) {
        return Err(Error::CalibrationDomain(format!("average B/T {avg_ratio} outside (0, 1)")));
    }
    let alpha = (1.0 - avg_gini).ln() / avg_ratio.ln();
    Weight::new(alpha).map_err(|_| {
        Error::CalibrationDomain(format!("calibrated weight {alpha} outside (0, 1]"))
    })
}

/// Calibrates on a cross-section of `(gini, ratio)` observations using the
/// arithmetic means of both columns.
pub fn calibrate_cross_section(observations: &[(f64, ShareRatio)]) -> Result<Weight> {
    if observations.is_empty() {
        return Err(Error::EmptyInput("no observations to calibrate on".into()));
    }
    let n = observations.len() as f64;
    let avg_gini = observations.iter().map(|o| o.0).sum::<f64>() / n;
    let avg_ratio = observations.iter().map(|o| o.1.value()).sum::<f64>() / n;
    calibrate_alpha(avg_gini, avg_ratio)
}

/// Unweighted mean of calibrated weights.
pub fn mean_alpha(alphas: &[Weight]) -> Result<Weight> {
    if alphas.is_empty() {
        return Err(Error::EmptyInput("no weights to average".into()));
    }
    let mean = alphas.iter().map(|w| w.value()).sum::<f64>() / alphas.len() as f64;
    Weight::new(mean)
}

fn check_gini(gini: f64) -> Result<()> {
    if (0.0..=1.0).contains(&gini) {
        Ok(())
    } else {
        Err(Error::Domain(format!("gini {gini} outside [0, 1]")))
    }
}

pub fn composite(gini: f64, ratio: ShareRatio, w: Weight) -> Result<CompositeResult> {
    check_gini(gini)?;
    let h = h_transform(ratio, w);
    let index_i = gini.hypot(h) / std::f64::consts::SQRT_2;
    Ok(CompositeResult {
        gini,
        ratio,
        weight: w,
        h,
        index_i: index_i.min(1.0),
        alt_index: alternative_index(gini, ratio.t_over_b()),
    })
}

/// Multi-percentile index `sqrt(gini^2 + sum_j H_j^2) / sqrt(N + 1)`, where
/// `H_j = 1 - ratio_j^alpha_j` and each ratio is `B_x / T_x` for a distinct
/// percent `x` in `(0, 50]`.
pub fn generalized_composite(
    gini: f64,
    ratios: &[(f64, ShareRatio)],
    weights: &[Weight],
) -> Result<f64> {
    check_gini(gini)?;
    if ratios.len() != weights.len() {
        return Err(Error::Arity { ratios: ratios.len(), weights: weights.len() });
    }
    if ratios.is_empty() {
        return Err(Error::EmptyInput("generalized index needs at least one ratio".into()));
    }
    for (i, &(x, _)) in ratios.iter().enumerate() {
        if !(x > 0.0 && x <= 50.0) {
            return Err(Error::Domain(format!("percent {x} outside (0, 50]")));
        }
        if ratios[..i].iter().any(|&(other, _)| other == x) {
            return Err(Error::Domain(format!("percent {x} listed twice")));
        }
    }
    let sum_sq: f64 = ratios
        .iter()
        .zip(weights)
        .map(|(&(_, r), &w)| h_transform(r, w).powi(2))
        .sum();
    let n = ratios.len() as f64;
    Ok(((gini * gini + sum_sq).sqrt() / (n + 1.0).sqrt()).min(1.0))
}

/// `sqrt((100 gini)^2 + (T/B)^2) / 100`: 0.01 at perfect equality, unbounded
/// above and infinite when the bottom share is zero.
pub fn alternative_index(gini: f64, t_over_b: f64) -> f64 {
    if t_over_b.is_infinite() {
        return f64::INFINITY;
    }
    (gini * 100.0).hypot(t_over_b) / 100.0
}

/// Round half away from zero to `decimals` places, as printed tables do.
///
/// A relative nudge of a few ulps keeps values like `0.3425` (stored as
/// `0.34249999...`) on the side their decimal spelling implies.
pub fn round_half_away(x: f64, decimals: i32) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let scale = 10f64.powi(decimals);
    let scaled = x * scale;
    let nudged = scaled + scaled.signum() * scaled.abs().max(1.0) * 4.0 * f64::EPSILON;
    nudged.round() / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tb(v: f64) -> ShareRatio {
        ShareRatio::from_t_over_b(v).unwrap()
    }

    #[test]
    fn h_examples() {
        assert_eq!(h_transform(ShareRatio::new(1.0).unwrap(), Weight::QUARTER), 0.0);
        assert_eq!(h_transform(ShareRatio::new(0.0).unwrap(), Weight::QUARTER), 1.0);
        assert_eq!(round_half_away(h_transform(tb(13.79), Weight::QUARTER), 3), 0.481);
        assert_eq!(round_half_away(h_transform(tb(3.2), Weight::QUARTER), 3), 0.252);
    }

    #[test]
    fn calibrate_examples() {
        let w = calibrate_alpha(0.36, 0.1).unwrap();
        assert!((w.value() - 0.64f64.ln() / 0.1f64.ln()).abs() < 1e-15);
        assert!((w.value() - 0.19382).abs() < 1e-5);
        let back = 1.0 - 0.1f64.powf(w.value());
        assert!((back - 0.36).abs() < 1e-12);
    }

    #[test]
    fn calibrate_domain() {
        for (g, r) in [(0.3, 1.0), (0.3, 0.0), (0.0, 0.2), (1.0, 0.2), (f64::NAN, 0.2)] {
            assert!(matches!(calibrate_alpha(g, r), Err(Error::CalibrationDomain(_))), "{g} {r}");
        }
        // alpha = ln(0.01)/ln(0.1) = 2 does not fit a weight
        assert!(matches!(calibrate_alpha(0.99, 0.1), Err(Error::CalibrationDomain(_))));
        assert!(matches!(calibrate_cross_section(&[]), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn mean_alpha_examples() {
        let w = |v| Weight::new(v).unwrap();
        assert!((mean_alpha(&[w(0.2), w(0.28)]).unwrap().value() - 0.24).abs() < 1e-15);
        assert_eq!(mean_alpha(&[w(0.25)]).unwrap().value(), 0.25);
        assert!(matches!(mean_alpha(&[]), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn composite_examples() {
        let greece = composite(0.360, tb(13.79), Weight::QUARTER).unwrap();
        assert_eq!(round_half_away(greece.index_i, 3), 0.425);
        let malta = composite(0.294, tb(6.74), Weight::QUARTER).unwrap();
        assert_eq!(round_half_away(malta.index_i, 3), 0.339);
        let equal = composite(0.0, ShareRatio::new(1.0).unwrap(), Weight::QUARTER).unwrap();
        assert_eq!(equal.index_i, 0.0);
        let extreme = composite(1.0, ShareRatio::new(0.0).unwrap(), Weight::QUARTER).unwrap();
        assert!((extreme.index_i - 1.0).abs() < 1e-15);
        assert!(matches!(composite(1.2, tb(2.0), Weight::QUARTER), Err(Error::Domain(_))));
        assert!(matches!(composite(-0.1, tb(2.0), Weight::QUARTER), Err(Error::Domain(_))));
    }

    #[test]
    fn generalized_examples() {
        let r = tb(9.0);
        let single = generalized_composite(0.31, &[(10.0, r)], &[Weight::QUARTER]).unwrap();
        let direct = composite(0.31, r, Weight::QUARTER).unwrap().index_i;
        assert!((single - direct).abs() < 1e-12);

        let ones: Vec<(f64, ShareRatio)> =
            [10.0, 20.0, 30.0].iter().map(|&x| (x, ShareRatio::new(1.0).unwrap())).collect();
        let g = generalized_composite(0.4, &ones, &[Weight::QUARTER; 3]).unwrap();
        assert!((g - 0.4 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn generalized_errors() {
        let r = tb(4.0);
        assert!(matches!(
            generalized_composite(0.3, &[(10.0, r), (20.0, r)], &[Weight::QUARTER]),
            Err(Error::Arity { ratios: 2, weights: 1 })
        ));
        assert!(matches!(generalized_composite(0.3, &[], &[]), Err(Error::EmptyInput(_))));
        assert!(generalized_composite(0.3, &[(10.0, r), (10.0, r)], &[Weight::QUARTER; 2]).is_err());
        assert!(generalized_composite(0.3, &[(60.0, r)], &[Weight::QUARTER]).is_err());
    }

    #[test]
    fn alternative_examples() {
        assert!((alternative_index(0.0, 1.0) - 0.01).abs() < 1e-15);
        assert!((alternative_index(0.360, 13.79) - 0.38551).abs() < 1e-5);
        assert_eq!(alternative_index(1.0, f64::INFINITY), f64::INFINITY);
        let c = composite(1.0, ShareRatio::new(0.0).unwrap(), Weight::QUARTER).unwrap();
        assert_eq!(c.alt_index, f64::INFINITY);
    }

    #[test]
    fn ratio_constructors() {
        assert_eq!(ShareRatio::from_t_over_b(f64::INFINITY).unwrap().value(), 0.0);
        assert!(ShareRatio::from_t_over_b(0.5).is_err());
        assert!(ShareRatio::new(1.01).is_err());
        assert_eq!(ShareRatio::from_shares(0.0, 0.3).unwrap().value(), 0.0);
        assert_eq!(ShareRatio::new(0.0).unwrap().t_over_b(), f64::INFINITY);
        assert!(Weight::new(0.0).is_err() && Weight::new(1.5).is_err() && Weight::new(1.0).is_ok());
    }

    #[test]
    fn rounding() {
        assert_eq!(round_half_away(0.3425, 3), 0.343);
        assert_eq!(round_half_away(0.2545, 3), 0.255);
        assert_eq!(round_half_away(-0.0005, 3), -0.001);
        assert_eq!(round_half_away(0.30202, 3), 0.302);
        assert_eq!(round_half_away(0.254, 3), 0.254);
    }
}
