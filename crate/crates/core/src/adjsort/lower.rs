//! The reversal family `w_{n,k}` and the quantities used to bound its
//! sorting cost from below.

use std::collections::BTreeMap;

use crate::arrangement::Arrangement;
use crate::error::{Error, Result};

/// Distance between positions `i` and `j` on a circle of `n` points.
pub fn circular_distance(n: usize, i: usize, j: usize) -> usize {
    let diff = i.abs_diff(j);
    diff.min(n - diff)
}

/// The involution `i -> k - i (mod n)` on the points `1..=n`, as an
/// arrangement: vertex `v` holds the image of point `v + 1`, with residue 0
/// written as `n`.
pub fn w_perm(n: usize, k: i64) -> Arrangement {
    assert!(n >= 1, "circle needs at least one vertex");
    let labels = (1..=n as i64)
        .map(|i| {
            let r = (k - i).rem_euclid(n as i64) as usize;
            if r == 0 {
                n
            } else {
                r
            }
        })
        .collect();
    Arrangement::from_labels_unchecked(labels)
}

/// Multiset of gaps `d(i, w_{n,k}(i))`, as value -> multiplicity.
pub fn gap_multiset(n: usize, k: i64) -> BTreeMap<usize, usize> {
    let w = w_perm(n, k);
    let mut gaps = BTreeMap::new();
    for (v, &image) in w.labels().iter().enumerate() {
        *gaps.entry(circular_distance(n, v, image - 1)).or_insert(0) += 1;
    }
    gaps
}

/// Proven lower bound on the number of affine swaps needed to sort
/// `w_{n,k}`, for even `n`.
pub fn n_lower_table(n: usize, k: i64) -> Result<u64> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::Domain(format!(
            "lower-bound table is defined for even n >= 2, got {n}"
        )));
    }
    let n64 = n as u64;
    let base = n64 * n64 - 2 * n64;
    if (k - (n / 2) as i64).rem_euclid(2) == 1 {
        Ok(base / 4)
    } else {
        Ok((base + 4) / 4)
    }
}
