//! Sampled nearest neighbor scores.
//!
//! Subsets are drawn uniformly without replacement. Every per-point and per-round
//! subset comes from its own seeded sub-stream (see [`crate::rng`]).

use rand::seq::index;

use super::ScoreVector;
use crate::distance::DistanceMatrix;
use crate::error::{Error, Result};
use crate::rng::{substream, Domain};

/// The shared subset of `population` reference indices used by round `round`,
/// sorted ascending.
pub fn round_sample(population: usize, size: usize, seed: u64, round: usize) -> Result<Vec<usize>> {
    if size == 0 || size > population {
        return Err(Error::input(format!(
            "sample size {size} outside 1..={population}"
        )));
    }
    let mut rng = substream(seed, Domain::RoundSample, round as u64);
    let mut picked = index::sample(&mut rng, population, size).into_vec();
    picked.sort_unstable();
    Ok(picked)
}

/// k-th nearest neighbor distance within a fresh per-point subset of the eligible
/// reference points.
pub fn score_kth_isnn(
    dist: &DistanceMatrix,
    k: usize,
    sample_size: usize,
    seed: u64,
) -> Result<ScoreVector> {
    if k == 0 || k > sample_size {
        return Err(Error::input(format!(
            "need 1 <= k <= sample size, got k = {k}, sample size = {sample_size}"
        )));
    }
    let values = (0..dist.nrows())
        .map(|i| {
            let eligible: Vec<f64> = dist.eligible(i).map(|(_, d)| d).collect();
            if sample_size > eligible.len() {
                return Err(Error::input(format!(
                    "sample size {sample_size} exceeds the {} eligible reference points",
                    eligible.len()
                )));
            }
            let mut rng = substream(seed, Domain::PointSample, i as u64);
            let mut picked: Vec<f64> = index::sample(&mut rng, eligible.len(), sample_size)
                .into_iter()
                .map(|p| eligible[p])
                .collect();
            picked.select_nth_unstable_by(k - 1, f64::total_cmp);
            Ok(picked[k - 1])
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ScoreVector::new(
        values,
        format!("kthisnn(k={k},sample={sample_size})"),
    ))
}

/// Minimum distance from every row to the given reference columns, skipping self-pairs.
pub fn score_snn_with_sample(dist: &DistanceMatrix, sample: &[usize]) -> Result<ScoreVector> {
    if sample.is_empty() {
        return Err(Error::input("empty sample"));
    }
    if let Some(&j) = sample.iter().find(|&&j| j >= dist.ncols()) {
        return Err(Error::input(format!("sample index {j} out of range")));
    }
    let values = (0..dist.nrows())
        .map(|i| {
            sample
                .iter()
                .filter(|&&j| !dist.is_masked(i, j))
                .map(|&j| dist.get(i, j))
                .min_by(f64::total_cmp)
                .ok_or_else(|| {
                    Error::input(format!(
                        "sample holds no reference point other than row {i}"
                    ))
                })
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ScoreVector::new(
        values,
        format!("snn(sample={})", sample.len()),
    ))
}

fn check_round_size(dist: &DistanceMatrix, sample_size: usize) -> Result<()> {
    let has_self = (0..dist.nrows()).any(|i| dist.self_pair(i).is_some());
    if has_self && sample_size < 2 {
        return Err(Error::input(
            "closed-world sampling needs a sample size of at least 2",
        ));
    }
    Ok(())
}

/// Nearest neighbor distance within one shared random subset.
pub fn score_snn(dist: &DistanceMatrix, sample_size: usize, seed: u64) -> Result<ScoreVector> {
    check_round_size(dist, sample_size)?;
    let sample = round_sample(dist.ncols(), sample_size, seed, 0)?;
    score_snn_with_sample(dist, &sample)
}

/// Mean of nearest neighbor distances over several explicit subsets.
pub fn score_rsnn_with_samples(
    dist: &DistanceMatrix,
    samples: &[Vec<usize>],
) -> Result<ScoreVector> {
    if samples.is_empty() {
        return Err(Error::input("at least one round is required"));
    }
    let mut total = vec![0.0; dist.nrows()];
    for sample in samples {
        let round = score_snn_with_sample(dist, sample)?;
        total
            .iter_mut()
            .zip(round.values)
            .for_each(|(t, v)| *t += v);
    }
    let r = samples.len() as f64;
    Ok(ScoreVector::new(
        total.into_iter().map(|t| t / r).collect(),
        format!("rsnn(rounds={})", samples.len()),
    ))
}

/// Mean of `rounds` sampled nearest neighbor scores, each round with its own subset.
pub fn score_rsnn(
    dist: &DistanceMatrix,
    rounds: usize,
    sample_size: usize,
    seed: u64,
) -> Result<ScoreVector> {
    if rounds == 0 {
        return Err(Error::input("at least one round is required"));
    }
    check_round_size(dist, sample_size)?;
    let samples = (0..rounds)
        .map(|r| round_sample(dist.ncols(), sample_size, seed, r))
        .collect::<Result<Vec<_>>>()?;
    let mut scores = score_rsnn_with_samples(dist, &samples)?;
    scores.detector = format!("rsnn(rounds={rounds},sample={sample_size})");
    Ok(scores)
}
