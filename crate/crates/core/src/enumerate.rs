//! Enumeration and factorial-base ranking of permutations.

use rayon::prelude::*;

use crate::arrangement::Arrangement;

/// `n!`, or `None` on overflow.
pub fn factorial(n: usize) -> Option<u64> {
    (1..=n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k))
}

/// Exact `n!` for budget messages.
pub fn factorial_u128(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |acc, k| acc.saturating_mul(k))
}

/// Rearranges `xs` into the next permutation in lexicographic order.
/// Returns false (leaving `xs` sorted ascending) after the last one.
pub fn next_permutation<T: Ord>(xs: &mut [T]) -> bool {
    let Some(i) = (1..xs.len()).rev().find(|&i| xs[i - 1] < xs[i]) else {
        xs.reverse();
        return false;
    };
    let j = (i..xs.len())
        .rev()
        .find(|&j| xs[j] > xs[i - 1])
        .expect("pivot has a successor");
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

/// Lexicographic rank of a permutation of `0..len` (Lehmer code).
pub fn rank(perm: &[u8], fact: &[u64]) -> u64 {
    let m = perm.len();
    let mut r = 0;
    for i in 0..m {
        let smaller = perm[i + 1..].iter().filter(|&&x| x < perm[i]).count() as u64;
        r += smaller * fact[m - 1 - i];
    }
    r
}

/// Inverse of [`rank`]; writes the permutation of `0..out.len()` into `out`.
pub fn unrank(mut r: u64, fact: &[u64], out: &mut [u8]) {
    let m = out.len();
    let mut pool: u32 = if m == 32 { u32::MAX } else { (1u32 << m) - 1 };
    for i in 0..m {
        let f = fact[m - 1 - i];
        let mut idx = (r / f) as u32;
        r %= f;
        // idx-th remaining element
        let mut bits = pool;
        loop {
            let low = bits.trailing_zeros();
            if idx == 0 {
                out[i] = low as u8;
                pool &= !(1 << low);
                break;
            }
            idx -= 1;
            bits &= bits - 1;
        }
    }
}

pub fn factorial_table(n: usize) -> Vec<u64> {
    (0..=n).map(|k| factorial(k).unwrap_or(u64::MAX)).collect()
}

/// Canonical arrangements (label 1 on vertex 0) of size `n`, in lexicographic order.
pub fn classes(n: usize) -> impl Iterator<Item = Arrangement> {
    assert!(n >= 1, "circle needs at least one vertex");
    let mut rest: Vec<usize> = (2..=n).collect();
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let mut labels = Vec::with_capacity(n);
        labels.push(1);
        labels.extend_from_slice(&rest);
        done = !next_permutation(&mut rest);
        Some(Arrangement::from_labels_unchecked(labels))
    })
}

/// Runs `visit` on every canonical label vector of size `n`, in parallel
/// over fixed prefixes, and folds the per-chunk results with `combine` in
/// lexicographic chunk order.
pub fn par_fold_classes<A, V, C>(n: usize, init: A, visit: V, combine: C) -> A
where
    A: Clone + Send + Sync,
    V: Fn(&mut A, &[usize]) + Sync,
    C: Fn(A, A) -> A + Sync,
{
    assert!(n >= 1, "circle needs at least one vertex");
    let prefix_len = (n - 1).min(2);
    let mut prefixes: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..prefix_len {
        prefixes = prefixes
            .into_iter()
            .flat_map(|p| {
                (2..=n)
                    .filter(|l| !p.contains(l))
                    .map(|l| {
                        let mut q = p.clone();
                        q.push(l);
                        q
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    let results: Vec<A> = prefixes
        .par_iter()
        .map(|prefix| {
            let mut acc = init.clone();
            let mut labels = Vec::with_capacity(n);
            labels.push(1);
            labels.extend_from_slice(prefix);
            let tail_start = labels.len();
            labels.extend((2..=n).filter(|l| !prefix.contains(l)));
            loop {
                visit(&mut acc, &labels);
                if !next_permutation(&mut labels[tail_start..]) {
                    break;
                }
            }
            acc
        })
        .collect();
    results.into_iter().fold(init, combine)
}
