//! Delimited-text datasets in; scores, reports and contrast curves out.
//!
//! Floats are written in shortest round-trip form, so reading a written file back
//! reproduces every value bit for bit.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use ndarray::Array2;
use tempfile::NamedTempFile;

use crate::dataset::Dataset;
use crate::detectors::SchemeKind;
use crate::error::{Error, Result};
use crate::evaluation::{EvaluationReport, ReportEntry};
use crate::normalization::{ContrastCurve, ContrastPoint, DistributionKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    Name(String),
    /// 0-based column position.
    Index(usize),
}

impl LabelColumn {
    /// All-digit strings select by position, anything else by header name.
    pub fn parse(s: &str) -> Self {
        match s.parse() {
            Ok(i) => LabelColumn::Index(i),
            Err(_) => LabelColumn::Name(s.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TabularFileSpec {
    pub path: PathBuf,
    pub delimiter: u8,
    pub header: bool,
    pub label_column: Option<LabelColumn>,
}

impl TabularFileSpec {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Self {
            path: path.into(),
            delimiter: b',',
            header: true,
            label_column: None,
        }
    }

    pub fn with_labels(mut self, column: LabelColumn) -> Self {
        self.label_column = Some(column);
        self
    }
}

/// Maps the accepted label spellings to 0 (normal) or 1 (outlier).
pub fn parse_label(cell: &str) -> Option<u8> {
    let cell = cell.trim().trim_matches(|c| c == '\'' || c == '"');
    match cell.to_ascii_lowercase().as_str() {
        "0" | "no" | "normal" => Some(0),
        "1" | "yes" | "outlier" | "anomaly" => Some(1),
        other => match other.parse::<f64>() {
            Ok(0.0) => Some(0),
            Ok(1.0) => Some(1),
            _ => None,
        },
    }
}

pub fn read_dataset(spec: &TabularFileSpec) -> Result<Dataset> {
    let path = &spec.path;
    let parse_err = |row: usize, column: usize, message: String| Error::Parse {
        path: path.clone(),
        row,
        column,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(spec.delimiter)
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut records = reader.records();

    let header: Option<Vec<String>> = if spec.header {
        match records.next() {
            Some(rec) => Some(rec?.iter().map(str::to_string).collect()),
            None => return Err(Error::input(format!("{}: file is empty", path.display()))),
        }
    } else {
        None
    };

    let mut width = header.as_ref().map(Vec::len);
    let label_idx = match &spec.label_column {
        None => None,
        Some(LabelColumn::Index(i)) => Some(*i),
        Some(LabelColumn::Name(name)) => {
            let names = header
                .as_ref()
                .ok_or_else(|| Error::input("a label column name needs a header row"))?;
            Some(names.iter().position(|h| h == name).ok_or_else(|| {
                Error::input(format!("{}: no column named '{name}'", path.display()))
            })?)
        }
    };

    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut rows = 0;
    for (r, rec) in records.enumerate() {
        let rec = rec?;
        let row = r + 1;
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        let w = *width.get_or_insert(rec.len());
        if rec.len() != w {
            return Err(parse_err(
                row,
                rec.len().min(w) + 1,
                format!("expected {w} fields, found {}", rec.len()),
            ));
        }
        if let Some(li) = label_idx {
            if li >= w {
                return Err(Error::input(format!(
                    "label column {li} out of range for {w} columns"
                )));
            }
        }
        for (c, cell) in rec.iter().enumerate() {
            if Some(c) == label_idx {
                let l = parse_label(cell)
                    .ok_or_else(|| parse_err(row, c + 1, format!("'{cell}' is not a label")))?;
                labels.push(l);
                continue;
            }
            let v: f64 = cell
                .parse()
                .map_err(|_| parse_err(row, c + 1, format!("'{cell}' is not a number")))?;
            if !v.is_finite() {
                return Err(parse_err(row, c + 1, format!("'{cell}' is not finite")));
            }
            values.push(v);
        }
        rows += 1;
    }
    if rows == 0 {
        return Err(Error::input(format!("{}: no data rows", path.display())));
    }
    let d = values.len() / rows;
    let points =
        Array2::from_shape_vec((rows, d), values).map_err(|e| Error::input(e.to_string()))?;
    Dataset::new(points, label_idx.map(|_| labels))
}

/// Formats a float so that parsing the text gives back the same bits.
pub fn format_f64(v: f64) -> String {
    format!("{v:?}")
}

fn parse_f64(cell: &str, path: &Path, row: usize, column: usize) -> Result<f64> {
    cell.parse().map_err(|_| Error::Parse {
        path: path.to_path_buf(),
        row,
        column,
        message: format!("'{cell}' is not a number"),
    })
}

/// Writes through a temporary file in the destination directory, then renames it into
/// place so readers never observe a partial file.
pub fn write_atomic(path: &Path, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let tmp = NamedTempFile::new_in(dir)?;
    {
        let mut w = BufWriter::new(tmp.as_file());
        body(&mut w)?;
        w.flush()?;
    }
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Per-point scores as read back from a score file.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    pub ids: Vec<usize>,
    pub raw: Vec<f64>,
    pub probabilities: Option<Vec<f64>>,
}

pub fn write_scores(
    path: &Path,
    ids: &[usize],
    raw: &[f64],
    probabilities: Option<&[f64]>,
) -> Result<()> {
    if ids.len() != raw.len() || probabilities.is_some_and(|p| p.len() != raw.len()) {
        return Err(Error::input(
            "ids, raw scores and probabilities differ in length",
        ));
    }
    write_atomic(path, |w| {
        match probabilities {
            Some(_) => writeln!(w, "id,raw_score,probability")?,
            None => writeln!(w, "id,raw_score")?,
        }
        for (i, (&id, &r)) in ids.iter().zip(raw).enumerate() {
            match probabilities {
                Some(p) => writeln!(w, "{id},{},{}", format_f64(r), format_f64(p[i]))?,
                None => writeln!(w, "{id},{}", format_f64(r))?,
            }
        }
        Ok(())
    })
}

fn open_csv(path: &Path) -> Result<(csv::StringRecord, csv::StringRecordsIntoIter<File>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)?;
    let header = reader.headers()?.clone();
    Ok((header, reader.into_records()))
}

pub fn read_scores(path: &Path) -> Result<ScoreTable> {
    let (header, records) = open_csv(path)?;
    let with_probs = match header.iter().collect::<Vec<_>>().as_slice() {
        ["id", "raw_score"] => false,
        ["id", "raw_score", "probability"] => true,
        _ => {
            return Err(Error::input(format!(
                "{}: not a score file",
                path.display()
            )))
        }
    };
    let mut table = ScoreTable {
        ids: Vec::new(),
        raw: Vec::new(),
        probabilities: with_probs.then(Vec::new),
    };
    for (r, rec) in records.enumerate() {
        let rec = rec?;
        let row = r + 1;
        table.ids.push(rec[0].parse().map_err(|_| Error::Parse {
            path: path.to_path_buf(),
            row,
            column: 1,
            message: format!("'{}' is not an id", &rec[0]),
        })?);
        table.raw.push(parse_f64(&rec[1], path, row, 2)?);
        if let Some(p) = table.probabilities.as_mut() {
            p.push(parse_f64(&rec[2], path, row, 3)?);
        }
    }
    Ok(table)
}

const REPORT_HEADER: &str =
    "detector,k,scheme,distribution,fold,auc_raw,auc,rank_stable,f1_threshold,f1,ks,wasserstein1";

pub fn write_report(path: &Path, report: &EvaluationReport) -> Result<()> {
    write_atomic(path, |w| {
        writeln!(w, "{REPORT_HEADER}")?;
        for e in &report.entries {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                e.detector,
                e.k,
                e.scheme.map_or("-", SchemeKind::as_str),
                e.distribution,
                e.fold,
                format_f64(e.auc_raw),
                format_f64(e.auc),
                e.rank_stable,
                format_f64(e.f1_threshold),
                format_f64(e.f1),
                format_f64(e.ks),
                format_f64(e.wasserstein1),
            )?;
        }
        Ok(())
    })
}

pub fn read_report(path: &Path) -> Result<EvaluationReport> {
    let (header, records) = open_csv(path)?;
    if header.iter().collect::<Vec<_>>().join(",") != REPORT_HEADER {
        return Err(Error::input(format!(
            "{}: not a report file",
            path.display()
        )));
    }
    let bad = |row: usize, column: usize, what: &str| Error::Parse {
        path: path.to_path_buf(),
        row,
        column,
        message: format!("invalid {what}"),
    };
    let mut report = EvaluationReport::default();
    for (r, rec) in records.enumerate() {
        let rec = rec?;
        let row = r + 1;
        report.entries.push(ReportEntry {
            detector: rec[0].to_string(),
            k: rec[1].parse().map_err(|_| bad(row, 2, "k"))?,
            scheme: match &rec[2] {
                "-" => None,
                s => Some(s.parse().map_err(|_| bad(row, 3, "scheme"))?),
            },
            distribution: rec[3]
                .parse::<DistributionKind>()
                .map_err(|_| bad(row, 4, "distribution"))?,
            fold: rec[4].parse().map_err(|_| bad(row, 5, "fold"))?,
            auc_raw: parse_f64(&rec[5], path, row, 6)?,
            auc: parse_f64(&rec[6], path, row, 7)?,
            rank_stable: rec[7].parse().map_err(|_| bad(row, 8, "flag"))?,
            f1_threshold: parse_f64(&rec[8], path, row, 9)?,
            f1: parse_f64(&rec[9], path, row, 10)?,
            ks: parse_f64(&rec[10], path, row, 11)?,
            wasserstein1: parse_f64(&rec[11], path, row, 12)?,
        });
    }
    Ok(report)
}

const CURVE_HEADER: &str = "m,ks,wasserstein1,f1_optimal_threshold";

pub fn write_curve(path: &Path, curve: &ContrastCurve) -> Result<()> {
    write_atomic(path, |w| {
        writeln!(w, "{CURVE_HEADER}")?;
        for p in &curve.points {
            writeln!(
                w,
                "{},{},{},{}",
                p.m,
                format_f64(p.ks),
                format_f64(p.wasserstein1),
                format_f64(p.f1_threshold)
            )?;
        }
        Ok(())
    })
}

/// Reads the `(m, ks, wasserstein1, threshold)` rows of a curve file. The F1 value is
/// not stored and comes back as NaN.
pub fn read_curve(path: &Path) -> Result<Vec<ContrastPoint>> {
    let (header, records) = open_csv(path)?;
    if header.iter().collect::<Vec<_>>().join(",") != CURVE_HEADER {
        return Err(Error::input(format!(
            "{}: not a curve file",
            path.display()
        )));
    }
    records
        .enumerate()
        .map(|(r, rec)| {
            let rec = rec?;
            let row = r + 1;
            Ok(ContrastPoint {
                m: rec[0].parse().map_err(|_| Error::Parse {
                    path: path.to_path_buf(),
                    row,
                    column: 1,
                    message: "invalid m".into(),
                })?,
                ks: parse_f64(&rec[1], path, row, 2)?,
                wasserstein1: parse_f64(&rec[2], path, row, 3)?,
                f1_threshold: parse_f64(&rec[3], path, row, 4)?,
                f1: f64::NAN,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::fs;

    fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
        let p = dir.path().join(name);
        fs::write(&p, body).unwrap();
        p
    }

    #[test]
    fn reads_header_and_label_column() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(&dir, "a.csv", "x,class\n1.5,no\n2.5,yes\n-3,outlier\n");
        let spec = TabularFileSpec::new(&p).with_labels(LabelColumn::Name("class".into()));
        let d = read_dataset(&spec).unwrap();
        assert_eq!((d.n(), d.dim()), (3, 1));
        assert_eq!(d.labels(), Some(&[0u8, 1, 1][..]));
        assert_eq!(d.points().column(0).to_vec(), vec![1.5, 2.5, -3.0]);

        let by_index = TabularFileSpec::new(&p).with_labels(LabelColumn::Index(1));
        assert_eq!(read_dataset(&by_index).unwrap(), d);
    }

    #[test]
    fn headerless_and_delimiter() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(&dir, "b.txt", "1;2\n3;4\n");
        let spec = TabularFileSpec {
            delimiter: b';',
            header: false,
            ..TabularFileSpec::new(&p)
        };
        let d = read_dataset(&spec).unwrap();
        assert_eq!(d.points(), &ndarray::array![[1.0, 2.0], [3.0, 4.0]]);
        assert!(d.labels().is_none());
    }

    #[test]
    fn nan_cell_reports_position() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(&dir, "c.csv", "a,b,c\n1,2,3\n4,5,NaN\n");
        let err = read_dataset(&TabularFileSpec::new(&p)).unwrap_err();
        match err {
            Error::Parse { row, column, .. } => assert_eq!((row, column), (2, 3)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(err_text(&p).contains("row 2, column 3"));
    }

    fn err_text(p: &Path) -> String {
        read_dataset(&TabularFileSpec::new(p))
            .unwrap_err()
            .to_string()
    }

    #[test]
    fn malformed_files() {
        let dir = tempfile::tempdir().unwrap();
        assert!(err_text(&write(&dir, "e.csv", "")).contains("empty"));
        assert!(err_text(&write(&dir, "h.csv", "a,b\n")).contains("no data rows"));
        assert!(matches!(
            read_dataset(&TabularFileSpec::new(write(&dir, "r.csv", "a,b\n1,2\n3\n"))),
            Err(Error::Parse { row: 2, .. })
        ));
        assert!(err_text(&write(&dir, "t.csv", "a\nhello\n")).contains("not a number"));
        let bad_label = write(&dir, "l.csv", "a,y\n1,maybe\n");
        let spec = TabularFileSpec::new(&bad_label).with_labels(LabelColumn::Name("y".into()));
        assert!(matches!(
            read_dataset(&spec),
            Err(Error::Parse {
                row: 1,
                column: 2,
                ..
            })
        ));
        let missing = TabularFileSpec::new(&bad_label).with_labels(LabelColumn::Name("z".into()));
        assert!(read_dataset(&missing).is_err());
        assert!(read_dataset(&TabularFileSpec::new(dir.path().join("nope.csv"))).is_err());
    }

    #[test]
    fn label_spellings() {
        for s in ["0", "no", "normal", "'no'", "0.0", "NORMAL"] {
            assert_eq!(parse_label(s), Some(0), "{s}");
        }
        for s in ["1", "yes", "outlier", "anomaly", "\"yes\""] {
            assert_eq!(parse_label(s), Some(1), "{s}");
        }
        assert_eq!(parse_label("2"), None);
    }

    #[test]
    fn annthyroid_shaped_file() {
        let dir = tempfile::tempdir().unwrap();
        let mut body = String::new();
        let names: Vec<String> = (0..21).map(|j| format!("att{j}")).collect();
        body.push_str(&names.join(","));
        body.push_str(",outlier\n");
        for i in 0..6942usize {
            let row: Vec<String> = (0..21)
                .map(|j| format!("{}", ((i * 31 + j * 7) % 997) as f64 / 997.0))
                .collect();
            body.push_str(&row.join(","));
            body.push_str(if i % 20 == 0 && i / 20 < 347 {
                ",yes\n"
            } else {
                ",no\n"
            });
        }
        let p = write(&dir, "annthyroid.csv", &body);
        let d = read_dataset(
            &TabularFileSpec::new(&p).with_labels(LabelColumn::Name("outlier".into())),
        )
        .unwrap();
        assert_eq!((d.n(), d.dim()), (6942, 21));
        assert_eq!(d.labels().unwrap().iter().filter(|&&l| l == 1).count(), 347);
    }

    #[test]
    fn score_files() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.csv");
        write_scores(&p, &[0, 1], &[0.5, 2.0], Some(&[0.25, 1.0])).unwrap();
        let text = fs::read_to_string(&p).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert_eq!(text.lines().next(), Some("id,raw_score,probability"));
        assert_eq!(text.lines().nth(2), Some("1,2.0,1.0"));

        write_scores(&p, &[0, 1], &[0.5, 2.0], None).unwrap();
        let text = fs::read_to_string(&p).unwrap();
        assert_eq!(text.lines().next(), Some("id,raw_score"));
        assert!(write_scores(&p, &[0], &[0.5, 2.0], None).is_err());
        assert!(write_scores(&dir.path().join("missing/dir/s.csv"), &[0], &[1.0], None).is_err());
    }

    #[test]
    fn report_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.csv");
        let report = EvaluationReport {
            entries: vec![
                ReportEntry {
                    detector: "knnw".into(),
                    k: 3,
                    scheme: Some(SchemeKind::Rank),
                    distribution: DistributionKind::Empirical,
                    fold: 1,
                    auc_raw: 0.1 + 0.2,
                    auc: 1.0 / 3.0,
                    rank_stable: true,
                    f1_threshold: f64::NEG_INFINITY,
                    f1: 2.0 / 3.0,
                    ks: 0.75,
                    wasserstein1: 0.1 + 0.2,
                },
                ReportEntry {
                    detector: "lof".into(),
                    k: 1,
                    scheme: None,
                    distribution: DistributionKind::None,
                    fold: 0,
                    auc_raw: 0.5,
                    auc: 0.5,
                    rank_stable: false,
                    f1_threshold: 1e-300,
                    f1: 0.0,
                    ks: 0.0,
                    wasserstein1: 0.0,
                },
            ],
            warnings: vec![],
        };
        write_report(&p, &report).unwrap();
        assert_eq!(read_report(&p).unwrap(), report);
    }

    #[test]
    fn curve_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.csv");
        let curve = ContrastCurve {
            distribution: DistributionKind::Exponential,
            points: vec![ContrastPoint {
                m: 4,
                ks: 0.75,
                wasserstein1: 0.1 + 0.7,
                f1_threshold: 0.95,
                f1: 1.0,
            }],
        };
        write_curve(&p, &curve).unwrap();
        let back = read_curve(&p).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(
            (
                back[0].m,
                back[0].ks,
                back[0].wasserstein1,
                back[0].f1_threshold
            ),
            (4, 0.75, 0.1 + 0.7, 0.95)
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn scores_round_trip_bit_exact(
            raw in prop::collection::vec(any::<f64>().prop_filter("finite", |v| v.is_finite()), 1..20),
            seed in any::<u64>(),
        ) {
            let dir = tempfile::tempdir().unwrap();
            let p = dir.path().join("s.csv");
            let probs: Vec<f64> = raw.iter().map(|v| (v.abs() + seed as f64).fract()).collect();
            let ids: Vec<usize> = (0..raw.len()).collect();
            write_scores(&p, &ids, &raw, Some(&probs)).unwrap();
            let back = read_scores(&p).unwrap();
            prop_assert_eq!(back.ids, ids);
            prop_assert_eq!(
                back.raw.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
                raw.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
            );
            prop_assert_eq!(back.probabilities.unwrap(), probs);
        }
    }
}
