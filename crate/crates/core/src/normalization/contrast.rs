use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::{
    build_normalization_set, fit, transform_scores, DistanceDistribution, DistributionKind,
    NormalizationSet, Strategy,
};
use crate::dataset::Dataset;
use crate::detectors::{Detector, ScoreVector};
use crate::distance::{pairwise_distances, DistanceMatrix};
use crate::error::{Error, Result};
use crate::evaluation::{check_binary_labels, f1_optimal_threshold};
use crate::neighbors::knn_from_matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    /// Largest absolute difference between the two empirical CDFs.
    Ks,
    /// Area between the two empirical CDFs (1-Wasserstein).
    Wasserstein1,
}

impl Measure {
    pub const ALL: [Measure; 2] = [Measure::Ks, Measure::Wasserstein1];

    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Ks => "ks",
            Measure::Wasserstein1 => "wasserstein1",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::input(format!("unknown measure '{s}'")))
    }
}

/// Statistical distance between two score samples.
pub fn statistical_distance(a: &[f64], b: &[f64], measure: Measure) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::input(
            "statistical distance needs two nonempty samples",
        ));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable_by(f64::total_cmp);
    b.sort_unstable_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);

    // sweep the merged support; between consecutive support points both ECDFs are flat
    let (mut i, mut j) = (0, 0);
    let (mut ks, mut area) = (0.0f64, 0.0f64);
    while i < a.len() || j < b.len() {
        let x = match (a.get(i), b.get(j)) {
            (Some(&u), Some(&v)) => u.min(v),
            (Some(&u), None) => u,
            (None, Some(&v)) => v,
            (None, None) => unreachable!(),
        };
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        let gap = (i as f64 / na - j as f64 / nb).abs();
        ks = ks.max(gap);
        let next = match (a.get(i), b.get(j)) {
            (Some(&u), Some(&v)) => u.min(v),
            (Some(&u), None) => u,
            (None, Some(&v)) => v,
            (None, None) => x,
        };
        area += gap * (next - x);
    }
    Ok(match measure {
        Measure::Ks => ks,
        Measure::Wasserstein1 => area,
    })
}

/// Contrast between inlier and outlier probabilities for one neighborhood size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContrastPoint {
    pub m: usize,
    pub ks: f64,
    pub wasserstein1: f64,
    /// F1-optimal cut-off on the transformed scores, and the F1 it achieves.
    pub f1_threshold: f64,
    pub f1: f64,
}

impl ContrastPoint {
    pub fn contrast(&self, measure: Measure) -> f64 {
        match measure {
            Measure::Ks => self.ks,
            Measure::Wasserstein1 => self.wasserstein1,
        }
    }
}

/// Contrast for every scanned `m`, ordered by `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContrastCurve {
    pub distribution: DistributionKind,
    pub points: Vec<ContrastPoint>,
}

impl ContrastCurve {
    /// The point with the largest contrast; ties go to the smallest `m`.
    pub fn argmax(&self, measure: Measure) -> &ContrastPoint {
        self.points
            .iter()
            .fold(None::<&ContrastPoint>, |best, p| match best {
                Some(b) if b.contrast(measure) >= p.contrast(measure) => Some(b),
                _ => Some(p),
            })
            .expect("curve is never empty")
    }
}

/// Splits values by binary label into (inliers, outliers).
pub(crate) fn split_by_label(values: &[f64], labels: &[u8]) -> (Vec<f64>, Vec<f64>) {
    let mut normal = Vec::new();
    let mut outlier = Vec::new();
    for (&v, &l) in values.iter().zip(labels) {
        if l == 1 {
            outlier.push(v)
        } else {
            normal.push(v)
        }
    }
    (normal, outlier)
}

/// Contrast of transformed scores for a single normalization set choice.
pub fn contrast_for_strategy(
    dist: &DistanceMatrix,
    scores: &ScoreVector,
    labels: &[u8],
    kind: DistributionKind,
    strategy: Strategy,
) -> Result<(f64, f64, f64, f64)> {
    contrast_for_set(
        &build_normalization_set(dist, strategy)?,
        scores,
        labels,
        kind,
    )
}

fn contrast_for_set(
    set: &NormalizationSet,
    scores: &ScoreVector,
    labels: &[u8],
    kind: DistributionKind,
) -> Result<(f64, f64, f64, f64)> {
    contrast_for_fitted(&fit(kind, set)?, scores, labels)
}

fn contrast_for_fitted(
    fitted: &DistanceDistribution,
    scores: &ScoreVector,
    labels: &[u8],
) -> Result<(f64, f64, f64, f64)> {
    let probs = transform_scores(scores, fitted);
    let (normal, outlier) = split_by_label(&probs.values, labels);
    let ks = statistical_distance(&normal, &outlier, Measure::Ks)?;
    let w1 = statistical_distance(&normal, &outlier, Measure::Wasserstein1)?;
    let (threshold, f1) = f1_optimal_threshold(&probs.values, labels)?;
    Ok((ks, w1, threshold, f1))
}

/// Scans m-neighborhood normalization sets over precomputed closed-world distances
/// and scores.
pub fn contrast_scan_scores(
    dist: &DistanceMatrix,
    scores: &ScoreVector,
    labels: &[u8],
    kind: DistributionKind,
    m_grid: &[usize],
) -> Result<ContrastCurve> {
    check_binary_labels(labels)?;
    if scores.len() != labels.len() || dist.nrows() != labels.len() {
        return Err(Error::input(
            "scores, labels and distances differ in length",
        ));
    }
    if !dist.is_closed_world() {
        return Err(Error::input(
            "normalization sets are built from a closed-world reference matrix",
        ));
    }
    let mut grid = m_grid.to_vec();
    grid.sort_unstable();
    grid.dedup();
    let n = dist.nrows();
    let hi = match (grid.first(), grid.last()) {
        (Some(&lo), Some(&hi)) if lo >= 1 && hi < n => hi,
        (None, _) => return Err(Error::input("empty m grid")),
        _ => {
            return Err(Error::input(format!(
                "m grid must lie within 1..={}",
                n - 1
            )))
        }
    };
    let nbrs = knn_from_matrix(dist, hi)?;
    let point = |m, (ks, wasserstein1, f1_threshold, f1)| ContrastPoint {
        m,
        ks,
        wasserstein1,
        f1_threshold,
        f1,
    };
    let points = if kind == DistributionKind::Empirical {
        // Rows of `nbrs` are sorted, so the pooled set for m is the set for m - 1 merged
        // with column m; this avoids re-sorting the whole pool for every m.
        let mut pooled: Vec<f64> = Vec::new();
        let mut wanted = grid.iter().copied().peekable();
        let mut points = Vec::with_capacity(grid.len());
        for m in 1..=hi {
            let mut column = nbrs.distances().column(m - 1).to_vec();
            column.sort_unstable_by(f64::total_cmp);
            pooled = merge_sorted(&pooled, &column);
            if wanted.next_if_eq(&m).is_some() {
                let fitted = DistanceDistribution::Empirical {
                    sorted: pooled.clone(),
                };
                points.push(point(m, contrast_for_fitted(&fitted, scores, labels)?));
            }
        }
        points
    } else {
        grid.par_iter()
            .map(|&m| {
                let set = NormalizationSet::from_neighbors(&nbrs, m)?;
                Ok(point(m, contrast_for_set(&set, scores, labels, kind)?))
            })
            .collect::<Result<Vec<_>>>()?
    };
    Ok(ContrastCurve {
        distribution: kind,
        points,
    })
}

fn merge_sorted(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i].total_cmp(&b[j]).is_le() {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Closed-world contrast scan of a labeled dataset: scores every point, then for each
/// `m` fits `kind` to the pooled m-neighborhood set and measures how far apart the
/// transformed inlier and outlier scores are.
pub fn contrast_scan(
    data: &Dataset,
    detector: &Detector,
    kind: DistributionKind,
    m_grid: &[usize],
    seed: u64,
) -> Result<ContrastCurve> {
    let labels = data
        .labels()
        .ok_or_else(|| Error::input("contrast scan needs labels"))?;
    check_binary_labels(labels)?;
    let dist = pairwise_distances(data)?;
    let scores = detector.score_matrix(&dist, &dist, seed)?;
    contrast_scan_scores(&dist, &scores, labels, kind, m_grid)
}
