mod common;

use std::path::Path;

use common::{column_f64, planted, read_table, run, write_csv};

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn line_file(dir: &Path, name: &str, xs: &[f64]) -> std::path::PathBuf {
    let p = dir.join(name);
    let rows: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
    write_csv(&p, &rows, None);
    p
}

#[test]
fn score_kthnn_on_line() {
    let dir = tempfile::tempdir().unwrap();
    let input = line_file(dir.path(), "a.csv", &[0.0, 1.0, 3.0]);
    let out = dir.path().join("s.csv");
    let o = run(
        &[
            "score",
            "--input",
            s(&input),
            "--detector",
            "kthnn",
            "--k",
            "1",
            "--output",
            s(&out),
        ],
        None,
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(column_f64(&out, "raw_score"), vec![1.0, 1.0, 2.0]);
    assert_eq!(read_table(&out).0, vec!["id", "raw_score"]);
}

#[test]
fn open_mode_self_match_scores_zero() {
    let dir = tempfile::tempdir().unwrap();
    let reference = line_file(dir.path(), "r.csv", &[0.0, 1.0, 3.0]);
    let query = line_file(dir.path(), "q.csv", &[3.0, 10.0]);
    let out = dir.path().join("s.csv");
    let o = run(
        &[
            "score",
            "--input",
            s(&query),
            "--mode",
            "open",
            "--reference",
            s(&reference),
            "--detector",
            "kthnn",
            "--k",
            "1",
            "--output",
            s(&out),
        ],
        None,
    );
    assert!(o.status.success());
    assert_eq!(column_f64(&out, "raw_score"), vec![0.0, 7.0]);

    let o = run(
        &[
            "score",
            "--input",
            s(&query),
            "--mode",
            "open",
            "--output",
            s(&out),
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let input = line_file(dir.path(), "a.csv", &[0.0, 1.0, 3.0]);
    let out = dir.path().join("s.csv");
    for args in [
        vec![
            "score",
            "--input",
            s(&input),
            "--detector",
            "bogus",
            "--output",
            s(&out),
        ],
        vec![
            "score",
            "--input",
            s(&input),
            "--detector",
            "snn",
            "--output",
            s(&out),
        ],
        vec![
            "score",
            "--input",
            s(&input),
            "--detector",
            "db",
            "--output",
            s(&out),
        ],
        vec![
            "normalize",
            "--input",
            s(&input),
            "--strategy",
            "m-neighborhood",
            "--output",
            s(&out),
        ],
        vec![
            "evaluate",
            "--input",
            s(&input),
            "--k-grid",
            "5-1",
            "--output",
            s(&out),
        ],
        vec!["frobnicate"],
    ] {
        let o = run(&args, None);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    assert!(!out.exists());
    let o = run(
        &["score", "--input", s(&input), "--output", s(&out)],
        Some(0),
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_for_each_subcommand() {
    for sub in ["score", "normalize", "evaluate", "contrast-scan"] {
        let o = run(&[sub, "--help"], None);
        assert!(o.status.success(), "{sub}");
        assert!(String::from_utf8_lossy(&o.stdout).contains("--input"));
    }
}

#[test]
fn data_and_fit_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let ragged = dir.path().join("bad.csv");
    std::fs::write(&ragged, "a,b\n1,2\n3\n").unwrap();
    let o = run(&["score", "--input", s(&ragged), "--output", s(&out)], None);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("row 2"));

    let input = line_file(dir.path(), "a.csv", &[0.0, 1.0, 3.0]);
    let o = run(
        &[
            "score",
            "--input",
            s(&input),
            "--k",
            "3",
            "--output",
            s(&out),
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(3));

    // every nearest-neighbor distance is 1, so the normal fit has zero spread
    let even = line_file(dir.path(), "e.csv", &[0.0, 1.0, 2.0]);
    let o = run(
        &[
            "normalize",
            "--input",
            s(&even),
            "--k",
            "1",
            "--distribution",
            "normal",
            "--strategy",
            "m-neighborhood",
            "--m",
            "1",
            "--output",
            s(&out),
        ],
        None,
    );
    assert_eq!(
        o.status.code(),
        Some(4),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn normalize_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let input = line_file(dir.path(), "a.csv", &[0.0, 1.0, 3.0]);
    let out = dir.path().join("n.csv");

    // the 2nd-neighbor distance of point 0 is 3, the largest reference distance
    let o = run(
        &[
            "normalize",
            "--input",
            s(&input),
            "--detector",
            "kthnn",
            "--k",
            "2",
            "--output",
            s(&out),
        ],
        None,
    );
    assert!(o.status.success());
    assert_eq!(read_table(&out).0, vec!["id", "raw_score", "probability"]);
    assert!(column_f64(&out, "probability").contains(&1.0));

    let o = run(
        &[
            "normalize",
            "--input",
            s(&input),
            "--distribution",
            "none",
            "--k",
            "1",
            "--output",
            s(&out),
        ],
        None,
    );
    assert!(o.status.success());
    assert_eq!(
        column_f64(&out, "probability"),
        column_f64(&out, "raw_score")
    );
}

#[test]
fn exponential_rate_is_inverse_mean() {
    let dir = tempfile::tempdir().unwrap();
    let (rows, _) = planted(3);
    let input = dir.path().join("p.csv");
    write_csv(&input, &rows, None);
    let out = dir.path().join("n.csv");
    let o = run(
        &[
            "normalize",
            "--input",
            s(&input),
            "--distribution",
            "exponential",
            "--output",
            s(&out),
        ],
        None,
    );
    assert!(o.status.success());
    let stderr = String::from_utf8_lossy(&o.stderr);
    let rate: f64 = stderr
        .split("rate=")
        .nth(1)
        .and_then(|t| t.split_whitespace().next())
        .unwrap()
        .parse()
        .unwrap();
    let mut sum = 0.0;
    let mut count = 0usize;
    for (i, a) in rows.iter().enumerate() {
        for (j, b) in rows.iter().enumerate() {
            if i != j {
                sum += a
                    .iter()
                    .zip(b)
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum::<f64>()
                    .sqrt();
                count += 1;
            }
        }
    }
    let expected = count as f64 / sum;
    assert!(
        (rate - expected).abs() <= 1e-12 * expected,
        "{rate} vs {expected}"
    );
}

#[test]
fn evaluate_planted_and_rerun() {
    let dir = tempfile::tempdir().unwrap();
    let (rows, labels) = planted(42);
    let input = dir.path().join("p.csv");
    write_csv(&input, &rows, Some(&labels));
    let args = |out: &Path| {
        vec![
            "evaluate".to_string(),
            "--input".into(),
            s(&input).into(),
            "--label-column".into(),
            "label".into(),
            "--k-grid".into(),
            "5".into(),
            "--schemes".into(),
            "mean".into(),
            "--distributions".into(),
            "empirical".into(),
            "--output".into(),
            s(out).into(),
        ]
    };
    let first = dir.path().join("r1.csv");
    let second = dir.path().join("r2.csv");
    let a1 = args(&first);
    let o = run(&a1.iter().map(String::as_str).collect::<Vec<_>>(), None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(
        stdout.contains("best knnw scheme=mean empirical: k=5"),
        "{stdout}"
    );
    let aucs = column_f64(&first, "auc");
    assert_eq!(aucs.len(), 2);
    assert!(aucs.iter().sum::<f64>() / 2.0 >= 0.99);

    let a2 = args(&second);
    run(&a2.iter().map(String::as_str).collect::<Vec<_>>(), Some(3));
    assert_eq!(
        std::fs::read(&first).unwrap(),
        std::fs::read(&second).unwrap()
    );

    let unlabeled = dir.path().join("u.csv");
    write_csv(&unlabeled, &rows, None);
    let o = run(
        &["evaluate", "--input", s(&unlabeled), "--output", s(&first)],
        None,
    );
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn contrast_scan_rows() {
    let dir = tempfile::tempdir().unwrap();
    let (rows, labels) = planted(7);
    let input = dir.path().join("p.csv");
    write_csv(&input, &rows, Some(&labels));
    let out = dir.path().join("c.csv");
    let o = run(
        &[
            "contrast-scan",
            "--input",
            s(&input),
            "--label-column",
            "label",
            "--m-grid",
            "4",
            "--output",
            s(&out),
        ],
        None,
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, body) = read_table(&out);
    assert_eq!(
        header,
        vec!["m", "ks", "wasserstein1", "f1_optimal_threshold"]
    );
    assert_eq!(body.len(), 1);
    assert_eq!(body[0][0], "4");
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(
        stdout.contains("max ks: m=4") && stdout.contains("max wasserstein1: m=4"),
        "{stdout}"
    );

    let o = run(
        &[
            "contrast-scan",
            "--input",
            s(&input),
            "--label-column",
            "label",
            "--m-grid",
            "1-210",
            "--output",
            s(&out),
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn contrast_zero_for_identical_classes() {
    let dir = tempfile::tempdir().unwrap();
    // evenly spaced points all share the same nearest-neighbor distance
    let rows: Vec<Vec<f64>> = (0..12).map(|i| vec![i as f64]).collect();
    let labels: Vec<u8> = (0..12).map(|i| (i % 2) as u8).collect();
    let input = dir.path().join("e.csv");
    write_csv(&input, &rows, Some(&labels));
    let out = dir.path().join("c.csv");
    let o = run(
        &[
            "contrast-scan",
            "--input",
            s(&input),
            "--label-column",
            "label",
            "--detector",
            "kthnn",
            "--k",
            "1",
            "--output",
            s(&out),
        ],
        None,
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        column_f64(&out, "m"),
        (1..=11).map(f64::from).collect::<Vec<_>>()
    );
    assert!(column_f64(&out, "ks").iter().all(|&v| v == 0.0));
    assert!(column_f64(&out, "wasserstein1").iter().all(|&v| v == 0.0));
}

/// Recomputes every row of a scan on 50 points with brute-force counting.
#[test]
fn contrast_scan_matches_brute_force() {
    let dir = tempfile::tempdir().unwrap();
    let (all, all_labels) = planted(11);
    let pick: Vec<usize> = (0..45).chain(200..205).collect();
    let rows: Vec<Vec<f64>> = pick.iter().map(|&i| all[i].clone()).collect();
    let labels: Vec<u8> = pick.iter().map(|&i| all_labels[i]).collect();
    let input = dir.path().join("p.csv");
    write_csv(&input, &rows, Some(&labels));
    let out = dir.path().join("c.csv");
    let o = run(
        &[
            "contrast-scan",
            "--input",
            s(&input),
            "--label-column",
            "label",
            "--detector",
            "knn",
            "--k",
            "3",
            "--output",
            s(&out),
        ],
        None,
    );
    assert!(o.status.success());

    let n = rows.len();
    let d = |i: usize, j: usize| -> f64 {
        rows[i]
            .iter()
            .zip(&rows[j])
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    };
    let mut sorted_rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut r: Vec<f64> = (0..n).filter(|&j| j != i).map(|j| d(i, j)).collect();
            r.sort_by(f64::total_cmp);
            r
        })
        .collect();
    let scores: Vec<f64> = sorted_rows
        .iter()
        .map(|r| r[..3].iter().sum::<f64>() / 3.0)
        .collect();
    let ks_col = column_f64(&out, "ks");
    let m_col = column_f64(&out, "m");
    assert_eq!(m_col.len(), n - 1);
    for (row, &m) in m_col.iter().enumerate() {
        let m = m as usize;
        let set: Vec<f64> = sorted_rows
            .iter_mut()
            .flat_map(|r| r[..m].to_vec())
            .collect();
        let cdf = |x: f64| set.iter().filter(|&&v| v <= x).count() as f64 / set.len() as f64;
        let probs: Vec<f64> = scores.iter().map(|&x| cdf(x)).collect();
        let ecdf = |cls: u8, t: f64| {
            let members: Vec<f64> = probs
                .iter()
                .zip(&labels)
                .filter(|(_, &l)| l == cls)
                .map(|(p, _)| *p)
                .collect();
            members.iter().filter(|&&p| p <= t).count() as f64 / members.len() as f64
        };
        let ks = probs
            .iter()
            .map(|&t| (ecdf(0, t) - ecdf(1, t)).abs())
            .fold(0.0, f64::max);
        assert!(
            (ks_col[row] - ks).abs() <= 1e-12,
            "m={m}: {} vs {ks}",
            ks_col[row]
        );
    }
}
