//! Cross-validated evaluation of detectors and score transformations.
//!
//! For each fold the training part is the reference set: its distance matrix feeds the
//! normalization set and the fitted distributions, and the test part is scored
//! open-world against it. Test scores never influence the fitted distributions.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::{f1_optimal_threshold, fold_split, rank_stability_check, roc_auc, stratified_kfold};
use crate::dataset::Dataset;
use crate::detectors::{Detector, SchemeKind, WeightScheme};
use crate::distance::{cross_distances, pairwise_distances};
use crate::error::{Error, Result};
use crate::neighbors::knn_from_matrix;
use crate::normalization::{
    build_normalization_set, fit, split_by_label, statistical_distance, transform_scores,
    DistanceDistribution, DistributionKind, Measure, Strategy,
};

/// Neighbor-based detector families that can be swept over a k grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DetectorFamily {
    Knnw,
    KthNn,
    Knn,
    Lof,
    Slof,
}

impl DetectorFamily {
    pub const ALL: [DetectorFamily; 5] = [
        DetectorFamily::Knnw,
        DetectorFamily::KthNn,
        DetectorFamily::Knn,
        DetectorFamily::Lof,
        DetectorFamily::Slof,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DetectorFamily::Knnw => "knnw",
            DetectorFamily::KthNn => "kthnn",
            DetectorFamily::Knn => "knn",
            DetectorFamily::Lof => "lof",
            DetectorFamily::Slof => "slof",
        }
    }

    fn uses_scheme(self) -> bool {
        self == DetectorFamily::Knnw
    }

    fn detector(self, k: usize, scheme: WeightScheme) -> Detector {
        match self {
            DetectorFamily::Knnw => Detector::Knnw { k, scheme },
            DetectorFamily::KthNn => Detector::KthNn { k },
            DetectorFamily::Knn => Detector::Knn { k },
            DetectorFamily::Lof => Detector::Lof { k },
            DetectorFamily::Slof => Detector::Slof { k },
        }
    }
}

impl fmt::Display for DetectorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DetectorFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DetectorFamily::ALL
            .into_iter()
            .find(|d| d.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::input(format!("'{s}' cannot be swept over k")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Protocol {
    pub detectors: Vec<DetectorFamily>,
    pub k_grid: Vec<usize>,
    /// Only used by the weighted detector; the other families ignore it.
    pub schemes: Vec<WeightScheme>,
    pub distributions: Vec<DistributionKind>,
    pub strategy: Strategy,
    pub folds: usize,
    pub seed: u64,
}

impl Default for Protocol {
    fn default() -> Self {
        Self {
            detectors: vec![DetectorFamily::Knnw],
            k_grid: (1..=100).collect(),
            schemes: SchemeKind::ALL.into_iter().map(WeightScheme::new).collect(),
            distributions: DistributionKind::ALL.to_vec(),
            strategy: Strategy::Full,
            folds: 2,
            seed: 42,
        }
    }
}

/// One (detector, k, scheme, distribution, fold) measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportEntry {
    pub detector: String,
    pub k: usize,
    /// `None` for detectors without a weighting scheme.
    pub scheme: Option<SchemeKind>,
    pub distribution: DistributionKind,
    pub fold: usize,
    pub auc_raw: f64,
    pub auc: f64,
    pub rank_stable: bool,
    pub f1_threshold: f64,
    pub f1: f64,
    /// Contrast between transformed inlier and outlier test scores.
    pub ks: f64,
    pub wasserstein1: f64,
}

/// Fold-averaged result of one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigSummary {
    pub detector: String,
    pub k: usize,
    pub scheme: Option<SchemeKind>,
    pub distribution: DistributionKind,
    pub mean_auc_raw: f64,
    pub mean_auc: f64,
    pub rank_stable: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvaluationReport {
    pub entries: Vec<ReportEntry>,
    /// Configurations that were skipped, with the reason.
    pub warnings: Vec<String>,
}

type ConfigKey = (String, usize, Option<SchemeKind>, DistributionKind);

impl EvaluationReport {
    /// Mean over folds for each configuration, in configuration order.
    pub fn summaries(&self) -> Vec<ConfigSummary> {
        let mut groups: BTreeMap<ConfigKey, Vec<&ReportEntry>> = BTreeMap::new();
        for e in &self.entries {
            groups
                .entry((e.detector.clone(), e.k, e.scheme, e.distribution))
                .or_default()
                .push(e);
        }
        groups
            .into_iter()
            .map(|((detector, k, scheme, distribution), es)| {
                let n = es.len() as f64;
                ConfigSummary {
                    detector,
                    k,
                    scheme,
                    distribution,
                    mean_auc_raw: es.iter().map(|e| e.auc_raw).sum::<f64>() / n,
                    mean_auc: es.iter().map(|e| e.auc).sum::<f64>() / n,
                    rank_stable: es.iter().all(|e| e.rank_stable),
                }
            })
            .collect()
    }

    /// For each (detector, scheme, distribution), the k with the highest mean test AUC;
    /// ties go to the smallest k. The choice is made on the test folds themselves.
    pub fn best_k(&self) -> Vec<ConfigSummary> {
        let mut best: BTreeMap<(String, Option<SchemeKind>, DistributionKind), ConfigSummary> =
            BTreeMap::new();
        for s in self.summaries() {
            let key = (s.detector.clone(), s.scheme, s.distribution);
            match best.get(&key) {
                Some(b) if b.mean_auc > s.mean_auc || (b.mean_auc == s.mean_auc && b.k <= s.k) => {}
                _ => {
                    best.insert(key, s);
                }
            }
        }
        best.into_values().collect()
    }
}

/// Runs the cross-validated protocol on a labeled dataset.
pub fn benchmark_run(data: &Dataset, protocol: &Protocol) -> Result<EvaluationReport> {
    let labels = data
        .labels()
        .ok_or_else(|| Error::input("evaluation needs a labeled dataset"))?;
    if protocol.detectors.is_empty()
        || protocol.k_grid.is_empty()
        || protocol.distributions.is_empty()
    {
        return Err(Error::input("protocol grid is empty"));
    }
    if protocol.detectors.contains(&DetectorFamily::Knnw) && protocol.schemes.is_empty() {
        return Err(Error::input(
            "the weighted detector needs at least one scheme",
        ));
    }
    let assignment = stratified_kfold(labels, protocol.folds, protocol.seed)?;
    let splits: Vec<(Vec<usize>, Vec<usize>)> = (0..protocol.folds)
        .map(|f| fold_split(&assignment, f))
        .collect();

    let min_train = splits
        .iter()
        .map(|(train, _)| train.len())
        .min()
        .unwrap_or(0);
    let mut k_grid = protocol.k_grid.clone();
    k_grid.sort_unstable();
    k_grid.dedup();
    let mut report = EvaluationReport::default();
    let usable: Vec<usize> = k_grid
        .into_iter()
        .filter(|&k| {
            let ok = k >= 1 && k < min_train;
            if !ok {
                report.warnings.push(format!(
                    "skipped k = {k}: folds have {min_train} training points"
                ));
            }
            ok
        })
        .collect();
    let Some(&k_max) = usable.last() else {
        return Ok(report);
    };

    // (family, k, scheme) in a fixed order
    let mut configs: Vec<(DetectorFamily, usize, Option<WeightScheme>)> = Vec::new();
    for &family in &protocol.detectors {
        for &k in &usable {
            if family.uses_scheme() {
                configs.extend(protocol.schemes.iter().map(|&s| (family, k, Some(s))));
            } else {
                configs.push((family, k, None));
            }
        }
    }

    for (fold, (train_idx, test_idx)) in splits.iter().enumerate() {
        let train = data.select(train_idx);
        let test = data.select(test_idx);
        let test_labels = test.labels().expect("labels carried through select");

        let reference = pairwise_distances(&train)?;
        let query = cross_distances(&test, &train)?;
        let query_nbrs = knn_from_matrix(&query, k_max)?;
        let reference_nbrs = knn_from_matrix(&reference, k_max)?;

        let set = build_normalization_set(&reference, protocol.strategy)?;
        let fitted: Vec<DistanceDistribution> = protocol
            .distributions
            .iter()
            .map(|&kind| fit(kind, &set))
            .collect::<Result<_>>()?;

        let fold_entries: Vec<Vec<ReportEntry>> = configs
            .par_iter()
            .map(|&(family, k, scheme)| {
                let detector = family.detector(k, scheme.unwrap_or_default());
                let raw = detector
                    .score_neighbors(&query_nbrs, &reference_nbrs)
                    .expect("neighbor-based family")?;
                let auc_raw = roc_auc(&raw.values, test_labels)?;
                fitted
                    .iter()
                    .map(|dist| {
                        let probs = transform_scores(&raw, dist);
                        let (f1_threshold, f1) = f1_optimal_threshold(&probs.values, test_labels)?;
                        let (normal, outlier) = split_by_label(&probs.values, test_labels);
                        Ok(ReportEntry {
                            detector: family.to_string(),
                            k,
                            scheme: scheme.map(|s| s.kind),
                            distribution: dist.kind(),
                            fold,
                            auc_raw,
                            auc: roc_auc(&probs.values, test_labels)?,
                            rank_stable: rank_stability_check(&raw.values, &probs.values)?,
                            f1_threshold,
                            f1,
                            ks: statistical_distance(&normal, &outlier, Measure::Ks)?,
                            wasserstein1: statistical_distance(
                                &normal,
                                &outlier,
                                Measure::Wasserstein1,
                            )?,
                        })
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        report.entries.extend(fold_entries.into_iter().flatten());
    }
    Ok(report)
}
