use super::auc::check_binary_labels;
use crate::error::{Error, Result};

fn f1(tp: usize, fp: usize, fn_: usize) -> f64 {
    if tp == 0 {
        0.0
    } else {
        (2 * tp) as f64 / (2 * tp + fp + fn_) as f64
    }
}

/// Threshold that maximizes the outlier-class F1 when predicting `score > threshold`.
///
/// Candidates are `+inf`, the midpoints between consecutive distinct scores, and
/// `-inf`. Ties go to the larger threshold.
pub fn f1_optimal_threshold(scores: &[f64], labels: &[u8]) -> Result<(f64, f64)> {
    if scores.len() != labels.len() {
        return Err(Error::input("scores and labels differ in length"));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::input("scores contain NaN"));
    }
    let (pos, _) = check_binary_labels(labels)?;

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let (mut best_t, mut best_f1) = (f64::INFINITY, 0.0);
    let (mut tp, mut fp) = (0, 0);
    let mut start = 0;
    while start < order.len() {
        // admit the whole group of equal scores at once
        let value = scores[order[start]];
        let mut end = start;
        while end < order.len() && scores[order[end]] == value {
            if labels[order[end]] == 1 {
                tp += 1;
            } else {
                fp += 1;
            }
            end += 1;
        }
        let threshold = match order.get(end) {
            Some(&next) => {
                let lower = scores[next];
                let mid = lower + (value - lower) / 2.0;
                if mid < value {
                    mid
                } else {
                    lower
                }
            }
            None => f64::NEG_INFINITY,
        };
        let score = f1(tp, fp, pos - tp);
        if score > best_f1 {
            best_f1 = score;
            best_t = threshold;
        }
        start = end;
    }
    Ok((best_t, best_f1))
}
