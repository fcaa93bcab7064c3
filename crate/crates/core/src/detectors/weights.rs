use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeKind {
    Max,
    Mean,
    Distance,
    Exponential,
    Linear,
    Rank,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 6] = [
        SchemeKind::Max,
        SchemeKind::Mean,
        SchemeKind::Distance,
        SchemeKind::Exponential,
        SchemeKind::Linear,
        SchemeKind::Rank,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeKind::Max => "max",
            SchemeKind::Mean => "mean",
            SchemeKind::Distance => "distance",
            SchemeKind::Exponential => "exponential",
            SchemeKind::Linear => "linear",
            SchemeKind::Rank => "rank",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::input(format!("unknown weighting scheme '{s}'")))
    }
}

/// Neighbor weighting for the weighted k-nearest-neighbor score. Every scheme gives
/// the largest weight to the farthest neighbor.
///
/// `s` is the exponent of the distance scheme; `a` and `b` shape the exponential
/// scheme `exp(a * d^b)`. Negative `a` inverts the emphasis towards close neighbors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightScheme {
    pub kind: SchemeKind,
    pub s: f64,
    pub a: f64,
    pub b: f64,
}

impl Default for WeightScheme {
    fn default() -> Self {
        Self::new(SchemeKind::Mean)
    }
}

impl WeightScheme {
    pub fn new(kind: SchemeKind) -> Self {
        Self {
            kind,
            s: 1.0,
            a: 1.0,
            b: 1.0,
        }
    }

    pub fn weights(&self, d: &[f64]) -> Result<Vec<f64>> {
        weights(self, d)
    }

    /// True when the parameters put more weight on closer neighbors: `s < 0` for the
    /// distance scheme, `a < 0` or `b < 0` for the exponential scheme.
    pub fn favors_near_neighbors(&self) -> bool {
        match self.kind {
            SchemeKind::Distance => self.s < 0.0,
            SchemeKind::Exponential => self.a < 0.0 || self.b < 0.0,
            _ => false,
        }
    }
}

/// Sum-normalized weights for an ascending vector of neighbor distances.
pub fn weights(scheme: &WeightScheme, d: &[f64]) -> Result<Vec<f64>> {
    let k = d.len();
    if k == 0 {
        return Err(Error::input("weights need at least one distance"));
    }
    if d.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::input("distances must be finite and nonnegative"));
    }
    if d.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::input("distances must be sorted ascending"));
    }

    let raw: Vec<f64> = match scheme.kind {
        SchemeKind::Max => {
            let mut w = vec![0.0; k];
            w[k - 1] = 1.0;
            return Ok(w);
        }
        SchemeKind::Mean => return Ok(vec![1.0 / k as f64; k]),
        SchemeKind::Rank => (1..=k).map(|r| r as f64).collect(),
        SchemeKind::Distance => d.iter().map(|&x| x.powf(scheme.s)).collect(),
        SchemeKind::Exponential => {
            // shifted by the largest exponent so large distances cannot overflow
            let expo: Vec<f64> = d.iter().map(|&x| scheme.a * x.powf(scheme.b)).collect();
            if expo.iter().any(|e| !e.is_finite()) {
                return Err(Error::input("exponential weights are not finite"));
            }
            let top = expo.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            expo.into_iter().map(|e| (e - top).exp()).collect()
        }
        SchemeKind::Linear => {
            let (lo, hi) = (d[0], d[k - 1]);
            if hi > lo {
                d.iter().map(|&x| (x - lo) / (hi - lo)).collect()
            } else {
                vec![1.0; k]
            }
        }
    };

    if raw.iter().any(|w| !w.is_finite()) {
        return Err(Error::input(format!(
            "{} weights are not finite",
            scheme.kind
        )));
    }
    let total: f64 = raw.iter().sum();
    if total <= 0.0 {
        // only reachable for the distance scheme with all-zero distances
        return Ok(vec![1.0 / k as f64; k]);
    }
    Ok(raw.into_iter().map(|w| w / total).collect())
}
