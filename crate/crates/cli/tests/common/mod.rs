#![allow(dead_code)]

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub const INLIERS: usize = 200;
pub const OUTLIERS: usize = 10;
pub const RADIUS: f64 = 10.0;
pub const DIM: usize = 2;

/// Unit-Gaussian inliers followed by outliers on a sphere of radius 10.
pub fn planted(seed: u64) -> (Vec<Vec<f64>>, Vec<u8>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gauss = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        (0..DIM).map(|_| StandardNormal.sample(rng)).collect()
    };
    let mut rows: Vec<Vec<f64>> = (0..INLIERS).map(|_| gauss(&mut rng)).collect();
    for _ in 0..OUTLIERS {
        let dir = gauss(&mut rng);
        let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        rows.push(dir.iter().map(|v| v / norm * RADIUS).collect());
    }
    let labels = (0..INLIERS + OUTLIERS)
        .map(|i| u8::from(i >= INLIERS))
        .collect();
    (rows, labels)
}

pub fn write_csv(path: &Path, rows: &[Vec<f64>], labels: Option<&[u8]>) {
    let dim = rows.first().map_or(0, Vec::len);
    let mut body: Vec<String> = (0..dim).map(|j| format!("x{j}")).collect();
    if labels.is_some() {
        body.push("label".into());
    }
    let mut text = body.join(",") + "\n";
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        text.push_str(&cells.join(","));
        if let Some(l) = labels {
            write!(text, ",{}", l[i]).unwrap();
        }
        text.push('\n');
    }
    std::fs::write(path, text).unwrap();
}

pub fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_outprob"))
}

pub fn run(args: &[&str], threads: Option<usize>) -> Output {
    let mut cmd = Command::new(bin());
    cmd.args(args).env_remove("OUTPROB_THREADS");
    if let Some(t) = threads {
        cmd.env("OUTPROB_THREADS", t.to_string());
    }
    cmd.output().expect("binary runs")
}

/// Parses a CSV file with a header into rows of string cells.
pub fn read_table(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines
        .next()
        .unwrap()
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    (header, rows)
}

pub fn column_f64(path: &Path, name: &str) -> Vec<f64> {
    let (header, rows) = read_table(path);
    let c = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[c].parse().unwrap()).collect()
}
