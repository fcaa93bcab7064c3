//! Distance-based outlier detection with a probabilistic score transformation.
//!
//! Raw scores from nearest-neighbor detectors are mapped through the cumulative
//! distribution of reference distances, turning an arbitrary distance into the
//! probability that a reference distance is no larger. The mapping is monotone, so
//! rankings (and ROC AUC) are preserved.
//!
//! ```
//! use outprob::{Dataset, Detector, DistributionKind, Strategy};
//! use outprob::{build_normalization_set, fit, pairwise_distances, transform_scores};
//!
//! let data = Dataset::from_rows(&[vec![0.0], vec![1.0], vec![2.0], vec![9.0]], None).unwrap();
//! let dist = pairwise_distances(&data).unwrap();
//! let raw = Detector::KthNn { k: 1 }.score_matrix(&dist, &dist, 0).unwrap();
//! let set = build_normalization_set(&dist, Strategy::Full).unwrap();
//! let probs = transform_scores(&raw, &fit(DistributionKind::Empirical, &set).unwrap());
//! assert!(probs.values[3] > probs.values[0]);
//! ```

pub mod dataset;
pub mod detectors;
pub mod distance;
pub mod error;
pub mod evaluation;
pub mod ingest;
pub mod neighbors;
pub mod normalization;
pub mod rng;

pub use dataset::{minmax_scale, Dataset, MinMaxScaler};
pub use detectors::{Detector, SchemeKind, ScoreVector, WeightScheme};
pub use distance::{cross_distances, euclidean, pairwise_distances, DistanceMatrix};
pub use error::{Error, Result};
pub use evaluation::{
    benchmark_run, f1_optimal_threshold, rank_stability_check, roc_auc, stratified_kfold,
    DetectorFamily, EvaluationReport, Protocol,
};
pub use neighbors::{knn_from_matrix, NeighborLists};
pub use normalization::{
    build_normalization_set, contrast_scan, fit, statistical_distance, transform_scores,
    ContrastCurve, DistanceDistribution, DistributionKind, Measure, NormalizationSet, Strategy,
};
