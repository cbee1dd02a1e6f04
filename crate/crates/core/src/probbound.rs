//! Exact cycle-count statistics of random permutations and the inequalities
//! bounding them.
//!
//! Counts and probabilities are exact (`BigUint` / `BigRational`); only the
//! transcendental right-hand sides are evaluated in `f64`. A floating-point
//! comparison reports a violation only when the exact side exceeds the bound
//! by more than [`REL_MARGIN`] relative.

use std::f64::consts::{E, PI};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const REL_MARGIN: f64 = 1e-9;

/// Triangular table of unsigned Stirling numbers of the first kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StirlingTable {
    rows: Vec<Vec<BigUint>>,
}

impl StirlingTable {
    /// Rows `0..=n_max` via `c(n,k) = c(n-1,k-1) + (n-1) c(n-1,k)`.
    pub fn new(n_max: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
        for n in 1..=n_max {
            let prev = &rows[n - 1];
            let row = (0..=n)
                .map(|k| {
                    let left = if k >= 1 {
                        prev[k - 1].clone()
                    } else {
                        BigUint::zero()
                    };
                    let right = prev.get(k).map_or_else(BigUint::zero, |c| c * (n - 1));
                    left + right
                })
                .collect();
            rows.push(row);
        }
        Self { rows }
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, n: usize, k: usize) -> Result<&BigUint> {
        self.rows.get(n).and_then(|row| row.get(k)).ok_or_else(|| {
            Error::Domain(format!(
                "c({n}, {k}) outside table of size {}",
                self.n_max()
            ))
        })
    }

    pub fn row(&self, n: usize) -> Option<&[BigUint]> {
        self.rows.get(n).map(Vec::as_slice)
    }
}

/// Number of permutations of `n` points with exactly `k` cycles.
pub fn stirling_first(n: usize, k: usize) -> Result<BigUint> {
    if k > n {
        return Err(Error::Domain(format!("need k <= n, got c({n}, {k})")));
    }
    StirlingTable::new(n).get(n, k).cloned()
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

fn ratio(num: &BigUint, den: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}

/// Probability that a uniform permutation of `n` points has exactly `k + 1` cycles.
pub fn cycle_prob(n: usize, k: usize) -> Result<BigRational> {
    if n == 0 || k >= n {
        return Err(Error::Domain(format!("need 0 <= k < n, got n={n} k={k}")));
    }
    Ok(ratio(&stirling_first(n, k + 1)?, &factorial(n)))
}

fn ln_factorial(k: u64) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

/// `(ln(n-1) + 1)^k / (n k!)`, the upper bound on `cycle_prob(n, k)`.
pub fn p31_bound(n: usize, k: usize) -> f64 {
    let base = ((n - 1) as f64).ln() + 1.0;
    (k as f64 * base.ln() - (n as f64).ln() - ln_factorial(k as u64)).exp()
}

/// `(ln n + 1)^k / (n k!)`, the slightly weaker bound used in the tail argument.
pub fn tail_term(n: usize, k: usize) -> f64 {
    let base = (n as f64).ln() + 1.0;
    (k as f64 * base.ln() - (n as f64).ln() - ln_factorial(k as u64)).exp()
}

/// `ceil(e (ln n + 1))`.
pub fn tail_threshold(n: u64) -> u64 {
    (E * ((n as f64).ln() + 1.0)).ceil() as u64
}

/// `n - ceil(e (ln n + 1))`; negative values are returned as-is.
pub fn general_lower_bound(n: u64) -> i64 {
    n as i64 - tail_threshold(n) as i64
}

/// `lhs <= rhs` up to the relative margin.
pub fn within_bound(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs * (1.0 + REL_MARGIN)
}

fn approx_equal(lhs: f64, rhs: f64) -> bool {
    (lhs - rhs).abs() <= REL_MARGIN * rhs.abs().max(lhs.abs())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct P31Check {
    pub n: usize,
    pub k: usize,
    /// Exact probability as `"num/den"`.
    pub exact: String,
    pub exact_f64: f64,
    pub bound: f64,
    pub holds: bool,
    pub equality: bool,
}

/// Compares the exact probability of `k + 1` cycles with its bound.
pub fn p31_check(table: &StirlingTable, n: usize, k: usize) -> Result<P31Check> {
    if n < 2 || k >= n {
        return Err(Error::Domain(format!(
            "need n >= 2 and k < n, got n={n} k={k}"
        )));
    }
    let exact = ratio(table.get(n, k + 1)?, &factorial(n));
    let exact_f64 = exact
        .to_f64()
        .ok_or_else(|| Error::Internal("probability not representable".into()))?;
    let bound = p31_bound(n, k);
    Ok(P31Check {
        n,
        k,
        exact: exact.to_string(),
        exact_f64,
        bound,
        holds: within_bound(exact_f64, bound),
        equality: approx_equal(exact_f64, bound),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    pub n: usize,
    pub k0: u64,
    /// `(ln n + 1)^k0 / (n k0!)`.
    pub pk_bound_at_k0: f64,
    /// `1 / (n sqrt(2 pi k0))`, the bound on `pk_bound_at_k0`.
    pub pk0_stirling_bound: f64,
    /// Exact probability of more than `k0` cycles, as `"num/den"`.
    pub exact_tail: String,
    pub exact_tail_f64: f64,
    /// `sum_{k=k0}^{n-1} (ln n + 1)^k / (n k!)`.
    pub term_sum: f64,
    /// Geometric-series bound `pk_bound_at_k0 / (1 - 1/e)` on `term_sum`.
    pub bound_tail: f64,
    /// `1 / (n (1 - 1/e) sqrt(2 pi k0))`.
    pub final_bound: f64,
    /// Every link of the chain holds and the exact tail is below `1/n`.
    pub chain_holds: bool,
}

/// Recomputes each step of the tail estimate for one `n`.
pub fn tail_report(table: &StirlingTable, n: usize) -> Result<TailReport> {
    if n < 2 {
        return Err(Error::Domain(format!("tail report needs n >= 2, got {n}")));
    }
    let k0 = tail_threshold(n as u64);
    let row = table
        .row(n)
        .ok_or_else(|| Error::Domain(format!("table too small for n={n}")))?;
    let tail_count: BigUint = row.iter().skip(k0 as usize + 1).sum();
    let exact = ratio(&tail_count, &factorial(n));
    let exact_tail_f64 = exact.to_f64().unwrap_or(0.0);

    let pk0 = tail_term(n, k0 as usize);
    let pk0_stirling_bound = 1.0 / (n as f64 * (2.0 * PI * k0 as f64).sqrt());
    let term_sum: f64 = (k0 as usize..n).map(|k| tail_term(n, k)).sum();
    let geometric = 1.0 / (1.0 - 1.0 / E);
    let bound_tail = pk0 * geometric;
    let final_bound = pk0_stirling_bound * geometric;
    let decays = (k0 as usize..n).all(|k| within_bound(tail_term(n, k + 1), tail_term(n, k) / E));
    let inv_n = 1.0 / n as f64;
    let strictly_below = exact < BigRational::new(BigInt::one(), BigInt::from(n));

    let chain_holds = strictly_below
        && within_bound(exact_tail_f64, term_sum)
        && within_bound(term_sum, bound_tail)
        && within_bound(pk0, pk0_stirling_bound)
        && within_bound(bound_tail, final_bound)
        && final_bound < inv_n
        && decays;
    Ok(TailReport {
        n,
        k0,
        pk_bound_at_k0: pk0,
        pk0_stirling_bound,
        exact_tail: exact.to_string(),
        exact_tail_f64,
        term_sum,
        bound_tail,
        final_bound,
        chain_holds,
    })
}

/// `k! > (k/e)^k sqrt(2 pi k)`, compared in log space.
pub fn factorial_lower_bound_holds(k: u64) -> bool {
    let k_f = k as f64;
    let rhs = k_f * (k_f / E).ln() + 0.5 * (2.0 * PI * k_f).ln();
    ln_factorial(k) > rhs
}

/// `(n-1)! e_k(1, 1/2, ..., 1/(n-1))`: the number of permutations with
/// `k + 1` cycles written as a sum over decreasing tuples.
pub fn harmonic_tuple_count(n: usize, k: usize) -> BigRational {
    // e[j] = elementary symmetric polynomial of degree j in 1/m, m < n
    let mut e = vec![BigRational::zero(); k + 1];
    e[0] = BigRational::one();
    for m in 1..n {
        let inv = BigRational::new(BigInt::one(), BigInt::from(m));
        for j in (1..=k).rev() {
            let add = &e[j - 1] * &inv;
            e[j] += add;
        }
    }
    let lead = BigRational::from_integer(BigInt::from(factorial(n.saturating_sub(1))));
    lead * &e[k]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(num: i64, den: i64) -> BigRational {
        BigRational::new(num.into(), den.into())
    }

    /// Cycle-count histogram of all permutations of `n` points.
    fn enumerate_cycles(n: usize) -> Vec<u64> {
        let mut counts = vec![0u64; n + 1];
        let mut p: Vec<usize> = (0..n).collect();
        loop {
            let mut seen = vec![false; n];
            let mut c = 0;
            for s in 0..n {
                if !seen[s] {
                    c += 1;
                    let mut i = s;
                    while !seen[i] {
                        seen[i] = true;
                        i = p[i];
                    }
                }
            }
            counts[c] += 1;
            if !crate::enumerate::next_permutation(&mut p) {
                break;
            }
        }
        counts
    }

    #[test]
    fn stirling_examples() {
        for n in 1..12 {
            assert_eq!(stirling_first(n, n).unwrap(), BigUint::one());
            assert_eq!(stirling_first(n, 1).unwrap(), factorial(n - 1));
        }
        assert_eq!(stirling_first(4, 2).unwrap(), BigUint::from(11u32));
        assert!(stirling_first(3, 4).is_err());
        assert_eq!(stirling_first(0, 0).unwrap(), BigUint::one());
    }

    #[test]
    fn stirling_matches_enumeration() {
        let table = StirlingTable::new(8);
        for n in 1..=8 {
            let counts = enumerate_cycles(n);
            for k in 0..=n {
                assert_eq!(
                    table.get(n, k).unwrap(),
                    &BigUint::from(counts[k]),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn row_sums_are_factorials() {
        let table = StirlingTable::new(60);
        for n in 0..=60 {
            let sum: BigUint = table.row(n).unwrap().iter().sum();
            assert_eq!(sum, factorial(n), "n={n}");
        }
    }

    #[test]
    fn harmonic_formula_matches_recurrence() {
        let table = StirlingTable::new(20);
        for n in 1..=20 {
            for k in 0..n {
                let exact =
                    BigRational::from_integer(BigInt::from(table.get(n, k + 1).unwrap().clone()));
                assert_eq!(harmonic_tuple_count(n, k), exact, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn cycle_prob_examples() {
        assert_eq!(cycle_prob(4, 1).unwrap(), q(11, 24));
        for n in 1..10 {
            assert_eq!(cycle_prob(n, 0).unwrap(), q(1, n as i64));
            let nf = factorial(n);
            assert_eq!(cycle_prob(n, n - 1).unwrap(), ratio(&BigUint::one(), &nf));
        }
        assert!(cycle_prob(4, 4).is_err());
    }

    #[test]
    fn p31_examples() {
        let table = StirlingTable::new(30);
        for n in 2..=30 {
            let c = p31_check(&table, n, 0).unwrap();
            assert!(c.holds && c.equality, "n={n}");
            assert!((p31_bound(n, 0) - 1.0 / n as f64).abs() < 1e-15);
        }
        assert!((p31_bound(4, 1) - 0.524_653).abs() < 1e-5);
        let c = p31_check(&table, 4, 1).unwrap();
        assert_eq!(c.exact, "11/24");
        assert!(c.holds && !c.equality);
        assert!(p31_check(&table, 10, 3).unwrap().holds);
        assert!(p31_check(&table, 4, 4).is_err());
    }

    #[test]
    fn general_bound_examples() {
        assert_eq!(general_lower_bound(100), 84);
        assert_eq!(general_lower_bound(1000), 978);
        assert!(general_lower_bound(2) < 0);
        assert_eq!(tail_threshold(10), 9);
        assert_eq!(tail_threshold(30), 12);
    }

    #[test]
    fn tail_examples() {
        let table = StirlingTable::new(30);
        let t10 = tail_report(&table, 10).unwrap();
        assert!(t10.exact_tail_f64 < 0.1);
        assert!(t10.chain_holds);
        let t30 = tail_report(&table, 30).unwrap();
        assert!(t30.exact_tail_f64 < 1.0 / 30.0);
        assert!(t30.exact_tail_f64 <= t30.bound_tail);
        // k0 >= n: no permutation has more than k0 cycles.
        let t5 = tail_report(&table, 5).unwrap();
        assert_eq!(t5.exact_tail, "0");
        assert!(tail_report(&table, 1).is_err());
    }

    #[test]
    fn factorial_bound() {
        for k in 1..=60 {
            assert!(factorial_lower_bound_holds(k), "k={k}");
        }
    }
}
