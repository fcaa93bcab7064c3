use crate::error::{Error, Result};

/// True when no strictly ordered pair of raw scores ends up in the opposite order
/// after the transformation. Ties, raw or newly created, are allowed.
pub fn rank_stability_check(raw: &[f64], transformed: &[f64]) -> Result<bool> {
    if raw.len() != transformed.len() {
        return Err(Error::input(format!(
            "{} raw scores vs {} transformed",
            raw.len(),
            transformed.len()
        )));
    }
    if raw.iter().chain(transformed).any(|v| v.is_nan()) {
        return Ok(false);
    }
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&a, &b| raw[a].total_cmp(&raw[b]));

    // walk groups of equal raw score; each group must sit at or above everything before it
    let mut prior_max = f64::NEG_INFINITY;
    let mut start = 0;
    while start < order.len() {
        let mut end = start;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        while end < order.len() && raw[order[end]] == raw[order[start]] {
            let t = transformed[order[end]];
            lo = lo.min(t);
            hi = hi.max(t);
            end += 1;
        }
        if lo < prior_max {
            return Ok(false);
        }
        prior_max = prior_max.max(hi);
        start = end;
    }
    Ok(true)
}
