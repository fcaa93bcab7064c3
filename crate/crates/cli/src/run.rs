use std::fmt;

use outprob::detectors::score_db_outlier;
use outprob::ingest::{
    read_dataset, write_curve, write_report, write_scores, LabelColumn, TabularFileSpec,
};
use outprob::normalization::contrast_scan_scores;
use outprob::{
    benchmark_run, build_normalization_set, cross_distances, fit, pairwise_distances,
    transform_scores, Dataset, Detector, DetectorFamily, DistanceMatrix, DistributionKind, Measure,
    MinMaxScaler, Protocol, SchemeKind, ScoreVector, Strategy, WeightScheme,
};

use crate::args::{
    parse_grid, parse_list, ContrastArgs, DetectorArgs, DetectorName, EvaluateArgs, InputArgs,
    Mode, NormalizeArgs, ScoreArgs, StrategyArgs, StrategyName, WeightArgs,
};

/// A failed run, classified by exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Data(String),
    Fit(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Data(_) => 3,
            Failure::Fit(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Fit(m) => f.write_str(m),
        }
    }
}

impl From<outprob::Error> for Failure {
    fn from(e: outprob::Error) -> Self {
        match e {
            outprob::Error::Fit(_) => Failure::Fit(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

type Outcome<T> = Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn file_spec(input: &InputArgs, path: &std::path::Path) -> Outcome<TabularFileSpec> {
    if !input.delimiter.is_ascii() {
        return Err(usage("--delimiter must be a single ASCII character"));
    }
    Ok(TabularFileSpec {
        path: path.to_path_buf(),
        delimiter: input.delimiter as u8,
        header: !input.no_header,
        label_column: input.label_column.as_deref().map(LabelColumn::parse),
    })
}

fn load(input: &InputArgs) -> Outcome<Dataset> {
    let data = read_dataset(&file_spec(input, &input.input)?)?;
    Ok(if input.minmax {
        MinMaxScaler::fit(&data).transform(&data)?
    } else {
        data
    })
}

fn labels_of(data: &Dataset) -> Outcome<Vec<u8>> {
    data.labels()
        .map(<[u8]>::to_vec)
        .ok_or_else(|| Failure::Data("input has no labels; pass --label-column".into()))
}

fn weight_scheme(w: &WeightArgs, kind: SchemeKind) -> WeightScheme {
    checked(WeightScheme {
        kind,
        s: w.s,
        a: w.a,
        b: w.b,
    })
}

fn checked(scheme: WeightScheme) -> WeightScheme {
    if scheme.favors_near_neighbors() {
        eprintln!(
            "warning: {} weights with these parameters favor near neighbors",
            scheme.kind
        );
    }
    scheme
}

enum Scorer {
    Detector(Detector),
    Db { delta: f64, alpha: f64 },
}

fn scorer(args: &DetectorArgs) -> Outcome<Scorer> {
    let k = args.k;
    let sample_size = || {
        args.sample_size
            .ok_or_else(|| usage("--sample-size is required for this detector"))
    };
    let detector = match args.detector {
        DetectorName::Knnw => Detector::Knnw {
            k,
            scheme: weight_scheme(&args.weights, args.weights.scheme),
        },
        DetectorName::Kthnn => Detector::KthNn { k },
        DetectorName::Knn => Detector::Knn { k },
        DetectorName::Lof => Detector::Lof { k },
        DetectorName::Slof => Detector::Slof { k },
        DetectorName::Kthisnn => Detector::KthIsnn {
            k,
            sample_size: sample_size()?,
        },
        DetectorName::Snn => Detector::Snn {
            sample_size: sample_size()?,
        },
        DetectorName::Rsnn => Detector::Rsnn {
            rounds: args.rounds,
            sample_size: sample_size()?,
        },
        DetectorName::Db => {
            let (Some(delta), Some(alpha)) = (args.delta, args.alpha) else {
                return Err(usage("db needs --delta and --alpha"));
            };
            return Ok(Scorer::Db { delta, alpha });
        }
    };
    Ok(Scorer::Detector(detector))
}

/// Raw scores of the input points and the closed-world matrix of the reference set.
fn compute_scores(args: &ScoreArgs) -> Outcome<(ScoreVector, DistanceMatrix)> {
    let scorer = scorer(&args.detector)?;
    let spec = file_spec(&args.input, &args.input.input)?;
    let query = read_dataset(&spec)?;
    match args.mode {
        Mode::Closed => {
            if args.reference.is_some() {
                return Err(usage("--reference is only used with --mode open"));
            }
            let data = if args.input.minmax {
                MinMaxScaler::fit(&query).transform(&query)?
            } else {
                query
            };
            let dist = pairwise_distances(&data)?;
            let scores = match scorer {
                Scorer::Detector(d) => d.score_matrix(&dist, &dist, args.seed)?,
                Scorer::Db { delta, alpha } => {
                    let flags = score_db_outlier(&dist, delta, alpha)?;
                    ScoreVector::new(flags.into_iter().map(f64::from).collect(), "db")
                }
            };
            Ok((scores, dist))
        }
        Mode::Open => {
            let path = args
                .reference
                .as_ref()
                .ok_or_else(|| usage("--mode open needs --reference"))?;
            let Scorer::Detector(detector) = scorer else {
                return Err(usage(
                    "db labels the points of a single set; use --mode closed",
                ));
            };
            let reference = read_dataset(&TabularFileSpec {
                path: path.clone(),
                ..spec
            })?;
            let (query, reference) = if args.input.minmax {
                let scaler = MinMaxScaler::fit(&reference);
                (scaler.transform(&query)?, scaler.transform(&reference)?)
            } else {
                (query, reference)
            };
            let dist = cross_distances(&query, &reference)?;
            let reference_dist = pairwise_distances(&reference)?;
            let scores = detector.score_matrix(&dist, &reference_dist, args.seed)?;
            Ok((scores, reference_dist))
        }
    }
}

pub fn score(args: &ScoreArgs) -> Outcome<()> {
    let (scores, _) = compute_scores(args)?;
    let ids: Vec<usize> = (0..scores.len()).collect();
    write_scores(&args.output, &ids, &scores.values, None)?;
    Ok(())
}

fn strategy(args: &StrategyArgs) -> Outcome<Strategy> {
    match (args.strategy, args.m) {
        (StrategyName::Full, None) => Ok(Strategy::Full),
        (StrategyName::Triangular, None) => Ok(Strategy::Triangular),
        (StrategyName::MNeighborhood, Some(m)) => Ok(Strategy::MNeighborhood(m)),
        (StrategyName::MNeighborhood, None) => Err(usage("--strategy m-neighborhood needs --m")),
        (_, Some(_)) => Err(usage("--m is only used with --strategy m-neighborhood")),
    }
}

pub fn normalize(args: &NormalizeArgs) -> Outcome<()> {
    let strategy = strategy(&args.strategy)?;
    if args.score.detector.detector == DetectorName::Db {
        return Err(usage("db produces labels, not scores to normalize"));
    }
    let (scores, reference_dist) = compute_scores(&args.score)?;
    let set = build_normalization_set(&reference_dist, strategy)?;
    let fitted = fit(args.distribution, &set)?;
    eprintln!("normalization set: {strategy}, {} distances", set.len());
    eprintln!("fitted: {fitted}");
    let probs = transform_scores(&scores, &fitted);
    let ids: Vec<usize> = (0..scores.len()).collect();
    write_scores(
        &args.score.output,
        &ids,
        &scores.values,
        Some(&probs.values),
    )?;
    Ok(())
}

pub fn evaluate(args: &EvaluateArgs) -> Outcome<()> {
    let protocol = Protocol {
        detectors: parse_list::<DetectorFamily>(&args.detectors).map_err(usage)?,
        k_grid: parse_grid(&args.k_grid).map_err(usage)?,
        schemes: parse_list::<SchemeKind>(&args.schemes)
            .map_err(usage)?
            .into_iter()
            .map(|kind| {
                checked(WeightScheme {
                    kind,
                    s: args.s,
                    a: args.a,
                    b: args.b,
                })
            })
            .collect(),
        distributions: parse_list::<DistributionKind>(&args.distributions).map_err(usage)?,
        strategy: strategy(&args.strategy)?,
        folds: args.folds,
        seed: args.seed,
    };
    let data = load(&args.input)?;
    labels_of(&data)?;
    let report = benchmark_run(&data, &protocol)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    write_report(&args.output, &report)?;
    for s in report.best_k() {
        println!(
            "best {}{} {}: k={} mean_auc={:?} mean_auc_raw={:?} rank_stable={}",
            s.detector,
            s.scheme.map(|k| format!(" scheme={k}")).unwrap_or_default(),
            s.distribution,
            s.k,
            s.mean_auc,
            s.mean_auc_raw,
            s.rank_stable
        );
    }
    Ok(())
}

pub fn contrast_scan(args: &ContrastArgs) -> Outcome<()> {
    let Scorer::Detector(detector) = scorer(&args.detector)? else {
        return Err(usage("db produces labels, not scores"));
    };
    let data = load(&args.input)?;
    let labels = labels_of(&data)?;
    let grid = match &args.m_grid {
        Some(g) => parse_grid(g).map_err(usage)?,
        None => (1..=200.min(data.n().saturating_sub(1))).collect(),
    };
    let dist = pairwise_distances(&data)?;
    let scores = detector.score_matrix(&dist, &dist, args.seed)?;
    let curve = contrast_scan_scores(&dist, &scores, &labels, args.distribution, &grid)?;
    write_curve(&args.output, &curve)?;
    for measure in [Measure::Ks, Measure::Wasserstein1] {
        let best = curve.argmax(measure);
        println!(
            "max {}: m={} contrast={:?}",
            measure.as_str(),
            best.m,
            best.contrast(measure)
        );
    }
    Ok(())
}
