//! Local density-ratio scores: the local outlier factor and its simplified variant.

use super::ScoreVector;
use crate::error::{Error, Result};
use crate::neighbors::NeighborLists;

/// Lower bound applied to distances and reachability sums before inversion, so that
/// duplicate points yield large finite densities instead of infinities.
pub const DENSITY_EPSILON: f64 = 1e-12;

fn check_reference(query: &NeighborLists, reference: &NeighborLists, k: usize) -> Result<()> {
    query.check_k(k)?;
    reference.check_k(k)?;
    if query.indices().iter().any(|&j| j >= reference.len()) {
        return Err(Error::input(
            "query neighbor indices exceed the reference neighbor lists",
        ));
    }
    Ok(())
}

/// Simplified LOF for closed-world neighbor lists.
pub fn score_slof(nbrs: &NeighborLists, k: usize) -> Result<ScoreVector> {
    score_slof_open(nbrs, nbrs, k)
}

/// Simplified LOF of query points whose neighbors index into `reference`, the
/// closed-world neighbor lists of the reference set.
///
/// The score is the point's own k-distance times the mean inverse k-distance of its
/// neighbors.
pub fn score_slof_open(
    query: &NeighborLists,
    reference: &NeighborLists,
    k: usize,
) -> Result<ScoreVector> {
    check_reference(query, reference, k)?;
    let inv_kdist: Vec<f64> = reference
        .kth_distances(k)?
        .into_iter()
        .map(|d| 1.0 / d.max(DENSITY_EPSILON))
        .collect();
    let values = (0..query.len())
        .map(|i| {
            let own = query.row_distances(i)[k - 1].max(DENSITY_EPSILON);
            let mean_density = query
                .row_indices(i)
                .iter()
                .take(k)
                .map(|&j| inv_kdist[j])
                .sum::<f64>()
                / k as f64;
            own * mean_density
        })
        .collect();
    Ok(ScoreVector::new(values, format!("slof(k={k})")))
}

/// Local reachability densities of the rows of `nbrs`, measured against
/// `reference_kdist`.
fn reachability_densities(nbrs: &NeighborLists, reference_kdist: &[f64], k: usize) -> Vec<f64> {
    (0..nbrs.len())
        .map(|i| {
            let d = nbrs.row_distances(i);
            let reach: f64 = nbrs
                .row_indices(i)
                .iter()
                .zip(d.iter())
                .take(k)
                .map(|(&j, &dij)| reference_kdist[j].max(dij))
                .sum::<f64>()
                / k as f64;
            1.0 / reach.max(DENSITY_EPSILON)
        })
        .collect()
}

/// Local outlier factor for closed-world neighbor lists. Neighbor lists carry the
/// point-to-neighbor distances, so no separate matrix is needed.
pub fn score_lof(nbrs: &NeighborLists, k: usize) -> Result<ScoreVector> {
    score_lof_open(nbrs, nbrs, k)
}

/// Local outlier factor of query points against a reference set described by its
/// closed-world neighbor lists.
pub fn score_lof_open(
    query: &NeighborLists,
    reference: &NeighborLists,
    k: usize,
) -> Result<ScoreVector> {
    check_reference(query, reference, k)?;
    let kdist = reference.kth_distances(k)?;
    let reference_lrd = reachability_densities(reference, &kdist, k);
    let query_lrd = reachability_densities(query, &kdist, k);
    let values = (0..query.len())
        .map(|i| {
            let mean_lrd = query
                .row_indices(i)
                .iter()
                .take(k)
                .map(|&j| reference_lrd[j])
                .sum::<f64>()
                / k as f64;
            mean_lrd / query_lrd[i]
        })
        .collect();
    Ok(ScoreVector::new(values, format!("lof(k={k})")))
}
