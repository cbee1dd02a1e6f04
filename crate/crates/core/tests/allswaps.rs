use std::collections::{HashMap, VecDeque};

use circlesort::allswaps::{
    cyc, lower_bound_t, mult_perm, multiplicative_report, sort_all_swaps, t_class, t_exhaustive,
    Perm,
};
use circlesort::Arrangement;

fn canon(labels: &[usize]) -> Vec<usize> {
    let s = labels.iter().position(|&l| l == 1).unwrap();
    labels[s..].iter().chain(&labels[..s]).copied().collect()
}

/// Arbitrary-swap distances over rotation classes by plain BFS.
fn naive_distances(n: usize) -> HashMap<Vec<usize>, usize> {
    let start: Vec<usize> = (1..=n).collect();
    let mut dist = HashMap::from([(start.clone(), 0)]);
    let mut queue = VecDeque::from([start]);
    while let Some(cur) = queue.pop_front() {
        let d = dist[&cur];
        for a in 0..n {
            for b in a + 1..n {
                let mut next = cur.clone();
                next.swap(a, b);
                let next = canon(&next);
                if !dist.contains_key(&next) {
                    dist.insert(next.clone(), d + 1);
                    queue.push_back(next);
                }
            }
        }
    }
    dist
}

#[test]
fn coset_formula_matches_naive_search() {
    for n in 1..=7 {
        let naive = naive_distances(n);
        for (labels, &d) in &naive {
            let a = Arrangement::new(labels.clone()).unwrap();
            assert_eq!(t_class(&Perm::from_arrangement(&a)).t_value, d, "{a}");
            let seq = sort_all_swaps(&a);
            assert_eq!(seq.len(), d);
            assert!(a.replay(&seq).unwrap().is_trivial_class());
        }
        if n >= 2 {
            let max = *naive.values().max().unwrap();
            assert_eq!(t_exhaustive(n, 1_000_000).unwrap().t_n, max, "n={n}");
        }
    }
}

#[test]
fn some_unit_attains_n_minus_2_at_primes() {
    for p in [3usize, 5, 7, 11, 13, 17, 19, 23] {
        let best = (1..p as u64)
            .map(|a| t_class(&mult_perm(p, a).unwrap()).t_value)
            .max()
            .unwrap();
        assert_eq!(best, p - 2, "p={p}");
    }
}

#[test]
fn eleven_units() {
    let report = multiplicative_report(11).unwrap();
    assert_eq!(report.rows.len(), 10);
    let three = report.row(3).unwrap();
    assert_eq!((three.order, three.cyc, three.t_value), (5, 3, 8));
    for row in &report.rows {
        let nine = row.t_value == 9;
        assert_eq!(nine, row.order == 10, "a={}", row.a);
        assert_eq!(cyc(&mult_perm(11, row.a).unwrap()), row.cyc);
    }
}

#[test]
fn lower_bounds_never_exceed_t() {
    for n in 2..=10 {
        let t = t_exhaustive(n, 1_000_000).unwrap().t_n as i64;
        for b in lower_bound_t(n as u64) {
            assert!(b.value <= t, "n={n} {b:?}");
        }
    }
}
