//! Probabilistic transformation of distance scores: normalization sets drawn from the
//! reference distance matrix, distributions fitted to them, and the contrast the
//! transformed scores achieve between inliers and outliers.

mod contrast;
mod distribution;
mod set;

pub(crate) use contrast::split_by_label;
pub use contrast::{
    contrast_for_strategy, contrast_scan, contrast_scan_scores, statistical_distance,
    ContrastCurve, ContrastPoint, Measure,
};
pub use distribution::{fit, transform_scores, DistanceDistribution, DistributionKind};
pub use set::{build_normalization_set, NormalizationSet, Strategy, SYMMETRY_TOLERANCE};
