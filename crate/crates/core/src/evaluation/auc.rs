use crate::error::{Error, Result};

/// Counts (outliers, inliers) and rejects anything that is not a two-class 0/1 vector.
pub(crate) fn check_binary_labels(labels: &[u8]) -> Result<(usize, usize)> {
    if labels.iter().any(|&l| l > 1) {
        return Err(Error::input("labels must be 0 or 1"));
    }
    let pos = labels.iter().filter(|&&l| l == 1).count();
    let neg = labels.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::input(
            "both normal (0) and outlier (1) labels are required",
        ));
    }
    Ok((pos, neg))
}

fn check_scores(scores: &[f64], labels: &[u8]) -> Result<()> {
    if scores.len() != labels.len() {
        return Err(Error::input(format!(
            "{} scores for {} labels",
            scores.len(),
            labels.len()
        )));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::input("scores contain NaN"));
    }
    Ok(())
}

/// Area under the ROC curve: the probability that a random outlier outscores a random
/// inlier, ties counting one half.
///
/// Rank-sum formulation with mid-ranks. Ranks are kept doubled so the Mann-Whitney
/// statistic stays an exact integer.
pub fn roc_auc(scores: &[f64], labels: &[u8]) -> Result<f64> {
    check_scores(scores, labels)?;
    let (pos, neg) = check_binary_labels(labels)?;

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    let mut rank_sum2: u128 = 0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        // ranks start+1..=end share the mid-rank (start + 1 + end) / 2
        let twice_mid = (start + 1 + end) as u128;
        let tied_pos = order[start..end]
            .iter()
            .filter(|&&i| labels[i] == 1)
            .count() as u128;
        rank_sum2 += twice_mid * tied_pos;
        start = end;
    }
    let (p, n) = (pos as u128, neg as u128);
    let u2 = rank_sum2 - p * (p + 1);
    Ok(u2 as f64 / (2 * p * n) as f64)
}
