//! Subsets of the ground set `[n] = {1, ..., n}`.
//!
//! Bases and other subsets are sorted vectors of 1-based labels, matching the
//! edge labels `e_1, ..., e_n` of the banana graph.

use itertools::Itertools;

/// A sorted subset of `{1, ..., n}` (1-based labels).
pub type Basis = Vec<usize>;

/// All `k`-subsets of `{1, ..., n}` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Basis> {
    (1..=n).combinations(k).collect()
}

pub fn complement(set: &[usize], n: usize) -> Basis {
    (1..=n).filter(|i| !set.contains(i)).collect()
}

/// 0/1 indicator vector of length `n`.
pub fn indicator(set: &[usize], n: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    for &i in set {
        v[i - 1] = 1;
    }
    v
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Compact label such as `"13"` for `{1, 3}`; labels above 9 are comma separated.
pub fn basis_label(set: &[usize]) -> String {
    if set.iter().all(|&i| i < 10) {
        set.iter().map(|i| i.to_string()).collect()
    } else {
        set.iter().map(|i| i.to_string()).join(",")
    }
}

pub fn is_valid_subset(set: &[usize], n: usize, k: usize) -> bool {
    set.len() == k && set.windows(2).all(|w| w[0] < w[1]) && set.iter().all(|&i| (1..=n).contains(&i))
}
