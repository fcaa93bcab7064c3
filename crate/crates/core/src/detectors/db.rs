use crate::distance::DistanceMatrix;
use crate::error::{Error, Result};

/// Distance-threshold outlier labels: a point is an outlier (1) when at least
/// `alpha * n` other points lie farther than `delta` from it, with `n` the total
/// number of points.
pub fn score_db_outlier(dist: &DistanceMatrix, delta: f64, alpha: f64) -> Result<Vec<u8>> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::input(format!("alpha = {alpha} outside [0, 1]")));
    }
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::input(format!("delta = {delta} must be positive")));
    }
    if !dist.is_closed_world() {
        return Err(Error::input("distance outliers need a closed-world matrix"));
    }
    let threshold = alpha * dist.ncols() as f64;
    Ok((0..dist.nrows())
        .map(|i| {
            let far = dist.eligible(i).filter(|&(_, d)| d > delta).count();
            u8::from(far as f64 >= threshold)
        })
        .collect())
}
