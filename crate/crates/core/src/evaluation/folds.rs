use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::rng::{substream, Domain};

/// Assigns every index to one of `folds` folds, keeping class proportions.
///
/// Each class is shuffled with its own seeded stream and dealt round-robin. Dealing
/// continues across classes, so fold sizes differ by at most one overall as well.
pub fn stratified_kfold(labels: &[u8], folds: usize, seed: u64) -> Result<Vec<usize>> {
    if folds < 2 {
        return Err(Error::input(format!("need at least 2 folds, got {folds}")));
    }
    if labels.iter().any(|&l| l > 1) {
        return Err(Error::input("labels must be 0 or 1"));
    }
    let mut assignment = vec![usize::MAX; labels.len()];
    let mut next = 0;
    for class in [0u8, 1] {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        if members.len() < folds {
            return Err(Error::input(format!(
                "class {class} has {} members, fewer than {folds} folds",
                members.len()
            )));
        }
        members.shuffle(&mut substream(seed, Domain::FoldShuffle, u64::from(class)));
        for i in members {
            assignment[i] = next;
            next = (next + 1) % folds;
        }
    }
    Ok(assignment)
}

/// (train, test) index lists for one fold.
pub fn fold_split(assignment: &[usize], fold: usize) -> (Vec<usize>, Vec<usize>) {
    (0..assignment.len()).partition(|&i| assignment[i] != fold)
}
