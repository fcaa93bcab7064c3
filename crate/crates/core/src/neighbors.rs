use ndarray::{s, Array2, ArrayView1};
use rayon::prelude::*;

use crate::distance::DistanceMatrix;
use crate::error::{Error, Result};

/// The `k` nearest reference points of every query row, nearest first.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborLists {
    distances: Array2<f64>,
    indices: Array2<usize>,
}

impl NeighborLists {
    pub fn k(&self) -> usize {
        self.distances.ncols()
    }

    pub fn len(&self) -> usize {
        self.distances.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn distances(&self) -> &Array2<f64> {
        &self.distances
    }

    pub fn indices(&self) -> &Array2<usize> {
        &self.indices
    }

    pub fn row_distances(&self, i: usize) -> ArrayView1<'_, f64> {
        self.distances.row(i)
    }

    pub fn row_indices(&self, i: usize) -> ArrayView1<'_, usize> {
        self.indices.row(i)
    }

    /// Distance from each row to its `k`-th neighbor (1-based).
    pub fn kth_distances(&self, k: usize) -> Result<Vec<f64>> {
        self.check_k(k)?;
        Ok(self.distances.column(k - 1).to_vec())
    }

    /// The first `k` neighbors of every row.
    pub fn truncate(&self, k: usize) -> Result<Self> {
        self.check_k(k)?;
        Ok(Self {
            distances: self.distances.slice(s![.., ..k]).to_owned(),
            indices: self.indices.slice(s![.., ..k]).to_owned(),
        })
    }

    pub(crate) fn check_k(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.k() {
            return Err(Error::input(format!(
                "k = {k} outside 1..={} available neighbors",
                self.k()
            )));
        }
        Ok(())
    }
}

/// Selects the `k` smallest unmasked distances of every row, ascending, with ties
/// broken by ascending reference index.
pub fn knn_from_matrix(dist: &DistanceMatrix, k: usize) -> Result<NeighborLists> {
    if k == 0 {
        return Err(Error::input("k must be positive"));
    }
    let m = dist.nrows();
    if let Some(row) = (0..m).find(|&i| dist.eligible_in_row(i) < k) {
        return Err(Error::input(format!(
            "k = {k} exceeds the {} eligible neighbors of row {row}",
            dist.eligible_in_row(row)
        )));
    }
    let rows: Vec<Vec<(usize, f64)>> = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut cand: Vec<(usize, f64)> = dist.eligible(i).collect();
            let by_dist =
                |a: &(usize, f64), b: &(usize, f64)| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0));
            if k < cand.len() {
                cand.select_nth_unstable_by(k - 1, by_dist);
                cand.truncate(k);
            }
            cand.sort_unstable_by(by_dist);
            cand
        })
        .collect();
    let mut distances = Array2::zeros((m, k));
    let mut indices = Array2::zeros((m, k));
    for (i, row) in rows.into_iter().enumerate() {
        for (c, (j, d)) in row.into_iter().enumerate() {
            distances[[i, c]] = d;
            indices[[i, c]] = j;
        }
    }
    Ok(NeighborLists { distances, indices })
}
