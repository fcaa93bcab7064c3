use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use libm::erfc;

use super::NormalizationSet;
use crate::detectors::ScoreVector;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DistributionKind {
    /// Scores are passed through untouched.
    None,
    Normal,
    Exponential,
    Empirical,
}

impl DistributionKind {
    pub const ALL: [DistributionKind; 4] = [
        DistributionKind::None,
        DistributionKind::Normal,
        DistributionKind::Exponential,
        DistributionKind::Empirical,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DistributionKind::None => "none",
            DistributionKind::Normal => "normal",
            DistributionKind::Exponential => "exponential",
            DistributionKind::Empirical => "empirical",
        }
    }
}

impl fmt::Display for DistributionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DistributionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DistributionKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::input(format!("unknown distribution '{s}'")))
    }
}

/// A distribution of reference distances, used to map a raw distance score to the
/// probability that a reference distance is at most that large.
#[derive(Debug, Clone, PartialEq)]
pub enum DistanceDistribution {
    None,
    Normal {
        mean: f64,
        std: f64,
    },
    Exponential {
        rate: f64,
    },
    /// Sorted ascending, never empty.
    Empirical {
        sorted: Vec<f64>,
    },
}

/// Maximum-likelihood fit of `kind` to the distances of `set`.
pub fn fit(kind: DistributionKind, set: &NormalizationSet) -> Result<DistanceDistribution> {
    let values = &set.values;
    if values.is_empty() {
        return Err(Error::fit("normalization set is empty"));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    match kind {
        DistributionKind::None => Ok(DistanceDistribution::None),
        DistributionKind::Normal => {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
            let std = var.sqrt();
            if !(std > 0.0 && std.is_finite()) {
                return Err(Error::fit(
                    "normal fit needs at least two distinct distances",
                ));
            }
            Ok(DistanceDistribution::Normal { mean, std })
        }
        DistributionKind::Exponential => {
            if !(mean > 0.0 && mean.is_finite()) {
                return Err(Error::fit("exponential fit needs a positive mean distance"));
            }
            Ok(DistanceDistribution::Exponential { rate: 1.0 / mean })
        }
        DistributionKind::Empirical => {
            let mut sorted = values.clone();
            sorted.sort_unstable_by(f64::total_cmp);
            Ok(DistanceDistribution::Empirical { sorted })
        }
    }
}

impl DistanceDistribution {
    pub fn kind(&self) -> DistributionKind {
        match self {
            DistanceDistribution::None => DistributionKind::None,
            DistanceDistribution::Normal { .. } => DistributionKind::Normal,
            DistanceDistribution::Exponential { .. } => DistributionKind::Exponential,
            DistanceDistribution::Empirical { .. } => DistributionKind::Empirical,
        }
    }

    /// Probability that a reference distance is `<= value`. The `None` distribution is
    /// the identity and returns `value` itself.
    pub fn cdf(&self, value: f64) -> f64 {
        match self {
            DistanceDistribution::None => value,
            DistanceDistribution::Normal { mean, std } => {
                0.5 * erfc(-(value - mean) / (std * SQRT_2))
            }
            DistanceDistribution::Exponential { rate } => {
                if value <= 0.0 {
                    0.0
                } else {
                    -(-rate * value).exp_m1()
                }
            }
            DistanceDistribution::Empirical { sorted } => {
                sorted.partition_point(|&s| s <= value) as f64 / sorted.len() as f64
            }
        }
    }

    /// Density at `value` for the parametric kinds.
    pub fn density(&self, value: f64) -> Option<f64> {
        match self {
            DistanceDistribution::Normal { mean, std } => {
                let z = (value - mean) / std;
                Some((-0.5 * z * z).exp() / (std * (2.0 * PI).sqrt()))
            }
            DistanceDistribution::Exponential { rate } => Some(if value < 0.0 {
                0.0
            } else {
                rate * (-rate * value).exp()
            }),
            _ => None,
        }
    }
}

impl fmt::Display for DistanceDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistanceDistribution::None => f.write_str("none"),
            DistanceDistribution::Normal { mean, std } => {
                write!(f, "normal mean={mean:?} std={std:?}")
            }
            DistanceDistribution::Exponential { rate } => write!(f, "exponential rate={rate:?}"),
            DistanceDistribution::Empirical { sorted } => write!(
                f,
                "empirical n={} min={:?} max={:?}",
                sorted.len(),
                sorted[0],
                sorted[sorted.len() - 1]
            ),
        }
    }
}

/// Maps every score through the distribution's CDF.
pub fn transform_scores(scores: &ScoreVector, dist: &DistanceDistribution) -> ScoreVector {
    ScoreVector::new(
        scores.values.iter().map(|&v| dist.cdf(v)).collect(),
        format!("{}|{}", scores.detector, dist.kind()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalization::Strategy;
    use proptest::prelude::*;

    fn set(values: &[f64]) -> NormalizationSet {
        NormalizationSet {
            values: values.to_vec(),
            strategy: Strategy::Full,
        }
    }

    #[test]
    fn closed_form_fits() {
        assert_eq!(
            fit(DistributionKind::Exponential, &set(&[1.0, 2.0, 3.0])).unwrap(),
            DistanceDistribution::Exponential { rate: 0.5 }
        );
        assert_eq!(
            fit(DistributionKind::Normal, &set(&[1.0, 3.0])).unwrap(),
            DistanceDistribution::Normal {
                mean: 2.0,
                std: 1.0
            }
        );
        assert_eq!(
            fit(DistributionKind::Empirical, &set(&[3.0, 1.0, 2.0])).unwrap(),
            DistanceDistribution::Empirical {
                sorted: vec![1.0, 2.0, 3.0]
            }
        );
    }

    #[test]
    fn degenerate_fits_are_typed_errors() {
        assert!(matches!(
            fit(DistributionKind::Normal, &set(&[2.0, 2.0])),
            Err(Error::Fit(_))
        ));
        assert!(matches!(
            fit(DistributionKind::Exponential, &set(&[0.0, 0.0])),
            Err(Error::Fit(_))
        ));
        assert!(matches!(
            fit(DistributionKind::Empirical, &set(&[])),
            Err(Error::Fit(_))
        ));
    }

    #[test]
    fn cdf_fixtures() {
        let exp = DistanceDistribution::Exponential { rate: 1.0 };
        assert!((exp.cdf(2f64.ln()) - 0.5).abs() < 1e-15);
        assert_eq!(exp.cdf(-1.0), 0.0);
        let norm = DistanceDistribution::Normal {
            mean: 0.0,
            std: 1.0,
        };
        assert_eq!(norm.cdf(0.0), 0.5);
        let emp = DistanceDistribution::Empirical {
            sorted: vec![1.0, 2.0, 3.0, 4.0],
        };
        assert_eq!(emp.cdf(2.0), 0.5);
        assert_eq!(emp.cdf(0.5), 0.0);
        assert_eq!(emp.cdf(9.0), 1.0);
        assert_eq!(DistanceDistribution::None.cdf(7.5), 7.5);
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn normal_cdf_against_high_precision_values() {
        // standard normal CDF, 25 digits (mpmath ncdf)
        let table = [
            (-8.0, 6.220960574271784123515995e-16),
            (-3.5, 0.0002326290790355250363499259),
            (-1.2345, 0.1085083233626701607440347),
            (0.3, 0.6179114221889526330722736),
            (1.0, 0.8413447460685429485852325),
            (2.5, 0.9937903346742238648330219),
            (5.0, 0.9999997133484281208060883),
            (7.9, 0.9999999999999986054828533),
        ];
        let std_normal = DistanceDistribution::Normal {
            mean: 0.0,
            std: 1.0,
        };
        let shifted = DistanceDistribution::Normal {
            mean: 3.0,
            std: 2.0,
        };
        for (z, p) in table {
            assert!((std_normal.cdf(z) - p).abs() <= 1e-12, "z = {z}");
            assert!((shifted.cdf(3.0 + 2.0 * z) - p).abs() <= 1e-12, "z = {z}");
        }
    }

    #[test]
    fn densities() {
        let norm = DistanceDistribution::Normal {
            mean: 0.0,
            std: 1.0,
        };
        assert!((norm.density(0.0).unwrap() - 0.3989422804014327).abs() < 1e-15);
        let exp = DistanceDistribution::Exponential { rate: 2.0 };
        assert_eq!(exp.density(0.0), Some(2.0));
        assert_eq!(exp.density(-1.0), Some(0.0));
        assert_eq!(
            DistanceDistribution::Empirical { sorted: vec![1.0] }.density(1.0),
            None
        );
    }

    #[test]
    fn transform_endpoints_and_percentile() {
        let values: Vec<f64> = (1..=100).map(f64::from).collect();
        let emp = fit(DistributionKind::Empirical, &set(&values)).unwrap();
        let scores = ScoreVector::new(vec![100.0, 0.5, 99.0, 250.0], "t");
        let out = transform_scores(&scores, &emp);
        assert_eq!(out.values, vec![1.0, 0.0, 0.99, 1.0]);
        let none = transform_scores(&scores, &DistanceDistribution::None);
        assert_eq!(none.values, scores.values);
    }

    proptest! {
        #[test]
        fn transforms_preserve_weak_order_in_unit_interval(
            set_values in prop::collection::vec(0.01f64..50.0, 2..40),
            mut scores in prop::collection::vec(0.0f64..80.0, 1..40),
        ) {
            scores.sort_by(f64::total_cmp);
            let s = set(&set_values);
            for kind in [DistributionKind::Normal, DistributionKind::Exponential, DistributionKind::Empirical] {
                let Ok(dist) = fit(kind, &s) else { continue };
                let probs: Vec<f64> = scores.iter().map(|&v| dist.cdf(v)).collect();
                prop_assert!(probs.iter().all(|p| (0.0..=1.0).contains(p)));
                prop_assert!(probs.windows(2).all(|w| w[0] <= w[1]));
            }
        }

        #[test]
        fn empirical_cdf_is_rank_count(values in prop::collection::vec(0u32..20, 1..30)) {
            let floats: Vec<f64> = values.iter().map(|&v| f64::from(v)).collect();
            let dist = fit(DistributionKind::Empirical, &set(&floats)).unwrap();
            for &v in &values {
                let count = values.iter().filter(|&&u| u <= v).count();
                prop_assert_eq!(dist.cdf(f64::from(v)), count as f64 / values.len() as f64);
            }
        }
    }
}
