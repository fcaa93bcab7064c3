//! Global scores built from each point's own neighbor distances.

use super::{ScoreVector, WeightScheme};
use crate::error::Result;
use crate::neighbors::NeighborLists;

/// Distance to the `k`-th nearest neighbor.
pub fn score_kthnn(nbrs: &NeighborLists, k: usize) -> Result<ScoreVector> {
    let values = nbrs.kth_distances(k)?;
    Ok(ScoreVector::new(values, format!("kthnn(k={k})")))
}

/// Mean distance to the `k` nearest neighbors.
pub fn score_knn(nbrs: &NeighborLists, k: usize) -> Result<ScoreVector> {
    nbrs.check_k(k)?;
    let values = nbrs
        .distances()
        .rows()
        .into_iter()
        .map(|row| row.iter().take(k).sum::<f64>() / k as f64)
        .collect();
    Ok(ScoreVector::new(values, format!("knn(k={k})")))
}

/// Weighted distance `(d . w) / sum(w)` over all neighbors held in `nbrs`.
pub fn score_knnw(nbrs: &NeighborLists, scheme: &WeightScheme) -> Result<ScoreVector> {
    let values = nbrs
        .distances()
        .rows()
        .into_iter()
        .map(|row| {
            let d = row.to_vec();
            let w = scheme.weights(&d)?;
            let num: f64 = d.iter().zip(&w).map(|(x, y)| x * y).sum();
            Ok(num / w.iter().sum::<f64>())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ScoreVector::new(
        values,
        format!("knnw(k={},scheme={})", nbrs.k(), scheme.kind),
    ))
}
