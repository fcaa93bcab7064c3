use std::fmt;
use std::str::FromStr;

use crate::distance::DistanceMatrix;
use crate::error::{Error, Result};
use crate::neighbors::NeighborLists;

/// Which entries of a closed-world distance matrix make up a normalization set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Every off-diagonal entry.
    Full,
    /// The strict upper triangle of a symmetric matrix.
    Triangular,
    /// Each reference point's `m` smallest off-diagonal distances, pooled.
    MNeighborhood(usize),
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Full => f.write_str("full"),
            Strategy::Triangular => f.write_str("triangular"),
            Strategy::MNeighborhood(m) => write!(f, "m-neighborhood({m})"),
        }
    }
}

impl FromStr for Strategy {
    type Err = Error;

    /// Accepts `full`, `triangular`, or `m-neighborhood:<m>`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "full" => Ok(Strategy::Full),
            "triangular" => Ok(Strategy::Triangular),
            _ => lower
                .strip_prefix("m-neighborhood:")
                .and_then(|m| m.parse().ok())
                .map(Strategy::MNeighborhood)
                .ok_or_else(|| Error::input(format!("unknown normalization strategy '{s}'"))),
        }
    }
}

/// Distances drawn from a reference distance matrix, never including self-pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationSet {
    pub values: Vec<f64>,
    pub strategy: Strategy,
}

impl NormalizationSet {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Pooled m-neighborhood set taken from closed-world neighbor lists, so a scan over
    /// many `m` needs only one neighbor search at the largest `m`.
    pub fn from_neighbors(nbrs: &NeighborLists, m: usize) -> Result<Self> {
        if m == 0 || m > nbrs.k() {
            return Err(Error::input(format!("m = {m} outside 1..={}", nbrs.k())));
        }
        let values = nbrs
            .distances()
            .rows()
            .into_iter()
            .flat_map(|row| row.iter().take(m).copied().collect::<Vec<_>>())
            .collect();
        Ok(Self {
            values,
            strategy: Strategy::MNeighborhood(m),
        })
    }
}

/// Relative tolerance used to decide whether the triangular strategy applies.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

pub fn build_normalization_set(
    dist: &DistanceMatrix,
    strategy: Strategy,
) -> Result<NormalizationSet> {
    if !dist.is_closed_world() {
        return Err(Error::input(
            "normalization sets are built from a closed-world reference matrix",
        ));
    }
    let n = dist.nrows();
    if n < 2 {
        return Err(Error::input(
            "normalization set needs at least 2 reference points",
        ));
    }
    let values = match strategy {
        Strategy::Full => (0..n)
            .flat_map(|i| dist.eligible(i).map(|(_, d)| d))
            .collect(),
        Strategy::Triangular => {
            if !dist.is_symmetric(SYMMETRY_TOLERANCE) {
                return Err(Error::input("triangular set requires a symmetric matrix"));
            }
            (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| dist.get(i, j)))
                .collect()
        }
        Strategy::MNeighborhood(m) => {
            if m == 0 || m > n - 1 {
                return Err(Error::input(format!("m = {m} outside 1..={}", n - 1)));
            }
            let nbrs = crate::neighbors::knn_from_matrix(dist, m)?;
            return NormalizationSet::from_neighbors(&nbrs, m);
        }
    };
    Ok(NormalizationSet { values, strategy })
}
