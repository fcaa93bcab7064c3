use ndarray::{Array2, ArrayView1, Axis};

use crate::error::{Error, Result};

/// A set of `n` points with `d` features, optionally labelled (0 normal, 1 outlier).
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    points: Array2<f64>,
    labels: Option<Vec<u8>>,
}

impl Dataset {
    pub fn new(points: Array2<f64>, labels: Option<Vec<u8>>) -> Result<Self> {
        if let Some(pos) = points.iter().position(|v| !v.is_finite()) {
            let (r, c) = (pos / points.ncols().max(1), pos % points.ncols().max(1));
            return Err(Error::input(format!(
                "non-finite value at point {r}, feature {c}"
            )));
        }
        if let Some(labels) = &labels {
            if labels.len() != points.nrows() {
                return Err(Error::input(format!(
                    "{} labels for {} points",
                    labels.len(),
                    points.nrows()
                )));
            }
            if let Some(bad) = labels.iter().find(|&&l| l > 1) {
                return Err(Error::input(format!("label {bad} is not 0 or 1")));
            }
        }
        Ok(Self { points, labels })
    }

    pub fn unlabeled(points: Array2<f64>) -> Result<Self> {
        Self::new(points, None)
    }

    /// Builds a dataset from row vectors. All rows must have the same length.
    pub fn from_rows(rows: &[Vec<f64>], labels: Option<Vec<u8>>) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::input("rows have differing lengths"));
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        let points = Array2::from_shape_vec((rows.len(), d), flat)
            .map_err(|e| Error::input(e.to_string()))?;
        Self::new(points, labels)
    }

    pub fn n(&self) -> usize {
        self.points.nrows()
    }

    pub fn dim(&self) -> usize {
        self.points.ncols()
    }

    pub fn points(&self) -> &Array2<f64> {
        &self.points
    }

    pub fn point(&self, i: usize) -> ArrayView1<'_, f64> {
        self.points.row(i)
    }

    pub fn labels(&self) -> Option<&[u8]> {
        self.labels.as_deref()
    }

    pub fn without_labels(&self) -> Self {
        Self {
            points: self.points.clone(),
            labels: None,
        }
    }

    /// The sub-dataset made of the given rows, in the given order.
    pub fn select(&self, rows: &[usize]) -> Self {
        Self {
            points: self.points.select(Axis(0), rows),
            labels: self
                .labels
                .as_ref()
                .map(|l| rows.iter().map(|&i| l[i]).collect()),
        }
    }
}

/// Per-feature min-max scaling fitted on one dataset and applicable to others
/// with the same feature dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct MinMaxScaler {
    min: Vec<f64>,
    max: Vec<f64>,
}

impl MinMaxScaler {
    pub fn fit(data: &Dataset) -> Self {
        let (min, max) = data
            .points
            .columns()
            .into_iter()
            .map(|col| {
                col.iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                        (lo.min(v), hi.max(v))
                    })
            })
            .unzip();
        Self { min, max }
    }

    /// Maps each feature through `(v - min) / (max - min)`. Constant features map to 0.
    pub fn transform(&self, data: &Dataset) -> Result<Dataset> {
        if data.dim() != self.min.len() {
            return Err(Error::input(format!(
                "scaler fitted on {} features, got {}",
                self.min.len(),
                data.dim()
            )));
        }
        let mut points = data.points.clone();
        for (j, mut col) in points.columns_mut().into_iter().enumerate() {
            let (lo, hi) = (self.min[j], self.max[j]);
            let span = hi - lo;
            col.mapv_inplace(|v| if span > 0.0 { (v - lo) / span } else { 0.0 });
        }
        Ok(Dataset {
            points,
            labels: data.labels.clone(),
        })
    }
}

/// Scales every feature column of `data` to `[0, 1]`.
pub fn minmax_scale(data: &Dataset) -> Dataset {
    MinMaxScaler::fit(data)
        .transform(data)
        .expect("scaler fitted on the same dataset")
}
