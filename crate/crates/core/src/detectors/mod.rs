//! Distance-based outlier scores. Higher scores mean more outlying.

mod db;
mod local;
mod neighbor;
mod sampling;
mod weights;

use std::fmt;

pub use db::score_db_outlier;
pub use local::{score_lof, score_lof_open, score_slof, score_slof_open, DENSITY_EPSILON};
pub use neighbor::{score_knn, score_knnw, score_kthnn};
pub use sampling::{
    round_sample, score_kth_isnn, score_rsnn, score_rsnn_with_samples, score_snn,
    score_snn_with_sample,
};
pub use weights::{weights, SchemeKind, WeightScheme};

use crate::dataset::Dataset;
use crate::distance::{cross_distances, pairwise_distances, DistanceMatrix};
use crate::error::{Error, Result};
use crate::neighbors::{knn_from_matrix, NeighborLists};

/// Outlier scores for a sequence of points, tagged with the detector that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    pub values: Vec<f64>,
    pub detector: String,
}

impl ScoreVector {
    pub fn new(values: Vec<f64>, detector: impl Into<String>) -> Self {
        Self {
            values,
            detector: detector.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

/// A configured scoring method.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Detector {
    KthNn { k: usize },
    Knn { k: usize },
    Knnw { k: usize, scheme: WeightScheme },
    KthIsnn { k: usize, sample_size: usize },
    Snn { sample_size: usize },
    Rsnn { rounds: usize, sample_size: usize },
    Lof { k: usize },
    Slof { k: usize },
}

impl Detector {
    pub fn name(&self) -> &'static str {
        match self {
            Detector::KthNn { .. } => "kthnn",
            Detector::Knn { .. } => "knn",
            Detector::Knnw { .. } => "knnw",
            Detector::KthIsnn { .. } => "kthisnn",
            Detector::Snn { .. } => "snn",
            Detector::Rsnn { .. } => "rsnn",
            Detector::Lof { .. } => "lof",
            Detector::Slof { .. } => "slof",
        }
    }

    /// Neighbor count for detectors that work on k-nearest-neighbor lists.
    pub fn neighbors(&self) -> Option<usize> {
        match *self {
            Detector::KthNn { k }
            | Detector::Knn { k }
            | Detector::Knnw { k, .. }
            | Detector::Lof { k }
            | Detector::Slof { k } => Some(k),
            _ => None,
        }
    }

    fn is_local(&self) -> bool {
        matches!(self, Detector::Lof { .. } | Detector::Slof { .. })
    }

    /// Scores from precomputed neighbor lists. `query` may hold more than `k`
    /// neighbors; only the first `k` are used. Local detectors also need the
    /// closed-world neighbor lists of the reference set (`reference`), which equal
    /// `query` in the closed world. Returns `None` for sampling detectors.
    pub fn score_neighbors(
        &self,
        query: &NeighborLists,
        reference: &NeighborLists,
    ) -> Option<Result<ScoreVector>> {
        let k = self.neighbors()?;
        let run = || -> Result<ScoreVector> {
            match self {
                Detector::KthNn { .. } => score_kthnn(query, k),
                Detector::Knn { .. } => score_knn(query, k),
                Detector::Knnw { scheme, .. } => {
                    let mut s = score_knnw(&query.truncate(k)?, scheme)?;
                    s.detector = self.to_string();
                    Ok(s)
                }
                Detector::Lof { .. } => score_lof_open(query, reference, k),
                Detector::Slof { .. } => score_slof_open(query, reference, k),
                _ => unreachable!("sampling detectors have no neighbor count"),
            }
        };
        Some(run())
    }

    /// Scores every row of `dist` against its columns. For local detectors `reference`
    /// must be the closed-world matrix of the reference set (pass `dist` itself in the
    /// closed world).
    pub fn score_matrix(
        &self,
        dist: &DistanceMatrix,
        reference: &DistanceMatrix,
        seed: u64,
    ) -> Result<ScoreVector> {
        match *self {
            Detector::KthIsnn { k, sample_size } => score_kth_isnn(dist, k, sample_size, seed),
            Detector::Snn { sample_size } => score_snn(dist, sample_size, seed),
            Detector::Rsnn {
                rounds,
                sample_size,
            } => score_rsnn(dist, rounds, sample_size, seed),
            _ => {
                let k = self.neighbors().expect("neighbor-based detector");
                let query = knn_from_matrix(dist, k)?;
                let reference = if self.is_local() {
                    if !reference.is_closed_world() {
                        return Err(Error::input(
                            "local detectors need the closed-world reference matrix",
                        ));
                    }
                    if reference.nrows() != dist.ncols() {
                        return Err(Error::input(
                            "reference matrix does not match the query columns",
                        ));
                    }
                    knn_from_matrix(reference, k)?
                } else {
                    query.clone()
                };
                self.score_neighbors(&query, &reference)
                    .expect("neighbor-based detector")
            }
        }
    }

    /// Closed-world (transductive) scores of the points of `data`.
    pub fn score_closed(&self, data: &Dataset, seed: u64) -> Result<ScoreVector> {
        let dist = pairwise_distances(data)?;
        self.score_matrix(&dist, &dist, seed)
    }

    /// Open-world (inductive) scores of `query` points against `reference`; every
    /// reference point is an eligible neighbor.
    pub fn score_open(
        &self,
        query: &Dataset,
        reference: &Dataset,
        seed: u64,
    ) -> Result<ScoreVector> {
        let dist = cross_distances(query, reference)?;
        let reference_dist = if self.is_local() {
            pairwise_distances(reference)?
        } else {
            // unused by non-local detectors
            DistanceMatrix::open(ndarray::Array2::zeros((0, 0)))?
        };
        self.score_matrix(&dist, &reference_dist, seed)
    }
}

impl fmt::Display for Detector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Detector::KthNn { k }
            | Detector::Knn { k }
            | Detector::Lof { k }
            | Detector::Slof { k } => {
                write!(f, "{}(k={k})", self.name())
            }
            Detector::Knnw { k, scheme } => write!(f, "knnw(k={k},scheme={})", scheme.kind),
            Detector::KthIsnn { k, sample_size } => {
                write!(f, "kthisnn(k={k},sample={sample_size})")
            }
            Detector::Snn { sample_size } => write!(f, "snn(sample={sample_size})"),
            Detector::Rsnn {
                rounds,
                sample_size,
            } => write!(f, "rsnn(rounds={rounds},sample={sample_size})"),
        }
    }
}
