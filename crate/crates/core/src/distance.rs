use ndarray::{Array2, ArrayView1, ArrayView2};
use rayon::prelude::*;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Euclidean distance between two feature vectors.
pub fn euclidean(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::input(format!(
            "dimension mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::input("non-finite coordinate"));
    }
    Ok(euclidean_unchecked(a.iter().copied(), b.iter().copied()))
}

#[inline]
fn euclidean_unchecked(a: impl Iterator<Item = f64>, b: impl Iterator<Item = f64>) -> f64 {
    a.zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn row_distance(a: ArrayView1<'_, f64>, b: ArrayView1<'_, f64>) -> f64 {
    euclidean_unchecked(a.iter().copied(), b.iter().copied())
}

/// Distances from `m` query points (rows) to `n` reference points (columns).
///
/// Each row may carry one masked column: the self-pair of a point that is scored
/// against the set it belongs to. Masked entries hold their true distance (0 for a
/// closed-world diagonal) but are never eligible as neighbors or normalization values.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    values: Array2<f64>,
    self_pairs: Vec<Option<usize>>,
}

impl DistanceMatrix {
    /// Wraps precomputed distances without any masking (open world).
    pub fn open(values: Array2<f64>) -> Result<Self> {
        Self::check_values(&values)?;
        let m = values.nrows();
        Ok(Self {
            values,
            self_pairs: vec![None; m],
        })
    }

    /// Wraps a square matrix whose diagonal entries are self-pairs (closed world).
    pub fn closed(values: Array2<f64>) -> Result<Self> {
        if values.nrows() != values.ncols() {
            return Err(Error::input("closed-world distance matrix must be square"));
        }
        Self::check_values(&values)?;
        let n = values.nrows();
        Ok(Self {
            values,
            self_pairs: (0..n).map(Some).collect(),
        })
    }

    /// Wraps distances with an explicit per-row self-pair column.
    pub fn with_self_pairs(values: Array2<f64>, self_pairs: Vec<Option<usize>>) -> Result<Self> {
        Self::check_values(&values)?;
        if self_pairs.len() != values.nrows() {
            return Err(Error::input("one self-pair entry per row required"));
        }
        if self_pairs.iter().flatten().any(|&j| j >= values.ncols()) {
            return Err(Error::input("self-pair column out of range"));
        }
        Ok(Self { values, self_pairs })
    }

    fn check_values(values: &Array2<f64>) -> Result<()> {
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::input("distances must be finite and nonnegative"));
        }
        Ok(())
    }

    pub fn nrows(&self) -> usize {
        self.values.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.values.ncols()
    }

    pub fn values(&self) -> ArrayView2<'_, f64> {
        self.values.view()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[[i, j]]
    }

    pub fn self_pair(&self, row: usize) -> Option<usize> {
        self.self_pairs[row]
    }

    pub fn is_masked(&self, i: usize, j: usize) -> bool {
        self.self_pairs[i] == Some(j)
    }

    /// True for a square matrix whose masked entries are exactly the diagonal.
    pub fn is_closed_world(&self) -> bool {
        self.nrows() == self.ncols()
            && self
                .self_pairs
                .iter()
                .enumerate()
                .all(|(i, p)| *p == Some(i))
    }

    /// Number of eligible (unmasked) entries in `row`.
    pub fn eligible_in_row(&self, row: usize) -> usize {
        self.ncols() - usize::from(self.self_pairs[row].is_some())
    }

    /// Unmasked `(column, distance)` pairs of a row.
    pub fn eligible(&self, row: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let mask = self.self_pairs[row];
        self.values
            .row(row)
            .into_iter()
            .copied()
            .enumerate()
            .filter(move |(j, _)| Some(*j) != mask)
    }

    /// Symmetric within `rel_tol` relative difference (absolute near zero).
    pub fn is_symmetric(&self, rel_tol: f64) -> bool {
        if self.nrows() != self.ncols() {
            return false;
        }
        let n = self.nrows();
        (0..n).all(|i| {
            (i + 1..n).all(|j| {
                let (a, b) = (self.values[[i, j]], self.values[[j, i]]);
                (a - b).abs() <= rel_tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
            })
        })
    }
}

/// Closed-world distance matrix of a reference set against itself.
pub fn pairwise_distances(reference: &Dataset) -> Result<DistanceMatrix> {
    let n = reference.n();
    if n < 2 {
        return Err(Error::input(format!(
            "pairwise distances need at least 2 points, got {n}"
        )));
    }
    let pts = reference.points();
    // Upper triangle per row, mirrored afterwards so both halves are bit-identical.
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i + 1..n)
                .map(|j| row_distance(pts.row(i), pts.row(j)))
                .collect()
        })
        .collect();
    let mut values = Array2::zeros((n, n));
    for (i, row) in upper.into_iter().enumerate() {
        for (off, d) in row.into_iter().enumerate() {
            let j = i + 1 + off;
            values[[i, j]] = d;
            values[[j, i]] = d;
        }
    }
    DistanceMatrix::closed(values)
}

/// Open-world distances of every query point to every reference point.
pub fn cross_distances(query: &Dataset, reference: &Dataset) -> Result<DistanceMatrix> {
    if query.dim() != reference.dim() {
        return Err(Error::input(format!(
            "dimension mismatch: query has {} features, reference {}",
            query.dim(),
            reference.dim()
        )));
    }
    let (m, n) = (query.n(), reference.n());
    let (q, r) = (query.points(), reference.points());
    let rows: Vec<f64> = (0..m)
        .into_par_iter()
        .flat_map_iter(|i| (0..n).map(move |j| row_distance(q.row(i), r.row(j))))
        .collect();
    let values = Array2::from_shape_vec((m, n), rows).expect("m*n distances");
    DistanceMatrix::open(values)
}
