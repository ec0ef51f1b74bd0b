use alloc::vec;
use alloc::vec::Vec;

/// Ranks with 1 = highest score; ties share the midpoint of their ranks.
pub fn midpoint_ranks(scores: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let mut ranks = vec![0.0; scores.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let mid = (i + j) as f64 / 2.0 + 1.0;
        for &o in &order[i..=j] {
            ranks[o] = mid;
        }
        i = j + 1;
    }
    ranks
}

/// Mean rank per system over the rows of a `[dataset][system]` table.
pub fn mean_ranks(ranks: &[Vec<f64>]) -> Vec<f64> {
    let Some(first) = ranks.first() else { return Vec::new() };
    (0..first.len()).map(|s| ranks.iter().map(|r| r[s]).sum::<f64>() / ranks.len() as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ties_take_the_midpoint() {
        assert_eq!(midpoint_ranks(&[0.5, 0.9, 0.5, 0.1]), vec![2.5, 1.0, 2.5, 4.0]);
        assert_eq!(midpoint_ranks(&[0.3; 4]), vec![2.5; 4]);
        assert_eq!(midpoint_ranks(&[0.7]), vec![1.0]);
    }
}
