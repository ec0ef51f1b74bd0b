//! Seeded, stratified fold assignment.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream seed from a base seed and a tag.
pub(crate) fn derive_seed(seed: u64, tag: u64) -> u64 {
    // splitmix64
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Fold id per row. Each class is shuffled with its own seeded stream and
/// dealt round-robin, so the assignment depends only on labels and seed.
///
/// `labels` are class indices in `0..n_classes`; every class must have at
/// least `k` rows.
pub fn stratified_folds(labels: &[usize], n_classes: usize, k: usize, seed: u64) -> Result<Vec<usize>> {
    if k < 2 {
        return Err(Error::InvalidParameter("k must be at least 2".into()));
    }
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
    for (row, &c) in labels.iter().enumerate() {
        by_class[c].push(row);
    }
    let mut folds = vec![0; labels.len()];
    // Continue the round-robin across classes so fold sizes stay balanced.
    let mut next = 0;
    for (c, rows) in by_class.iter_mut().enumerate() {
        if rows.is_empty() {
            continue;
        }
        if rows.len() < k {
            return Err(Error::InsufficientExamples { class: c.to_string(), count: rows.len(), k });
        }
        let mut rng = rng(derive_seed(seed, c as u64));
        rows.shuffle(&mut rng);
        for &row in rows.iter() {
            folds[row] = next % k;
            next += 1;
        }
    }
    Ok(folds)
}

/// `(train, test)` row indices for each fold, in increasing row order.
pub fn fold_indices(folds: &[usize], k: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    (0..k)
        .map(|f| {
            let (test, train): (Vec<usize>, Vec<usize>) = (0..folds.len()).partition(|&r| folds[r] == f);
            (train, test)
        })
        .collect()
}

/// Stratified split into `(train, validation)` rows; each class keeps at
/// least one row on both sides when it has two or more rows.
pub fn stratified_split(labels: &[usize], n_classes: usize, train_fraction: f64, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
    for (row, &c) in labels.iter().enumerate() {
        by_class[c].push(row);
    }
    let mut train = Vec::new();
    let mut valid = Vec::new();
    for (c, rows) in by_class.iter_mut().enumerate() {
        let mut rng = rng(derive_seed(seed, 0x5EED_0000 + c as u64));
        rows.shuffle(&mut rng);
        let n = rows.len();
        let mut n_train = libm::round(n as f64 * train_fraction) as usize;
        if n >= 2 {
            n_train = n_train.clamp(1, n - 1);
        } else {
            n_train = n;
        }
        train.extend_from_slice(&rows[..n_train]);
        valid.extend_from_slice(&rows[n_train..]);
    }
    train.sort_unstable();
    valid.sort_unstable();
    (train, valid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn folds_are_stratified_and_balanced() {
        let labels: Vec<usize> = (0..30).map(|i| i % 3).collect();
        let folds = stratified_folds(&labels, 3, 5, 7).unwrap();
        for f in 0..5 {
            for c in 0..3 {
                let n = (0..30).filter(|&r| folds[r] == f && labels[r] == c).count();
                assert_eq!(n, 2);
            }
        }
    }

    #[test]
    fn too_few_examples_is_an_error() {
        let labels = vec![0, 0, 0, 1, 1];
        assert!(matches!(
            stratified_folds(&labels, 2, 3, 0),
            Err(Error::InsufficientExamples { count: 2, k: 3, .. })
        ));
    }

    #[test]
    fn same_seed_same_folds() {
        let labels: Vec<usize> = (0..50).map(|i| i % 2).collect();
        assert_eq!(stratified_folds(&labels, 2, 5, 3).unwrap(), stratified_folds(&labels, 2, 5, 3).unwrap());
        assert_ne!(stratified_folds(&labels, 2, 5, 3).unwrap(), stratified_folds(&labels, 2, 5, 4).unwrap());
    }

    #[test]
    fn split_keeps_both_sides_nonempty() {
        let labels = vec![0, 0, 1, 1, 1, 1, 1, 1, 1, 1];
        let (train, valid) = stratified_split(&labels, 2, 0.8, 1);
        assert_eq!(train.len() + valid.len(), 10);
        for c in 0..2 {
            assert!(train.iter().any(|&r| labels[r] == c));
            assert!(valid.iter().any(|&r| labels[r] == c));
        }
    }
}
