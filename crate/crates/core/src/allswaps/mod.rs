//! Sorting cyclic permutations when any two labels may be swapped.
//!
//! A cyclic permutation `[pi]` is the right coset `pi C_n`, where `C_n` is
//! generated by the rotation `c: i -> i + 1`. Its sorting time is the minimum
//! of `n - cyc(sigma)` over the coset.

pub mod units;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::arrangement::{Arrangement, GenSwap, SwapSequence};
use crate::enumerate::{factorial_u128, par_fold_classes};
use crate::error::{Error, Result};
use crate::probbound::general_lower_bound;

pub use units::{
    is_prime, multiplicative_order, odd_generator_2pk, primitive_root, shift_fixed_point,
    simultaneous_generator,
};

/// A permutation of the points `0..n` (`map[i]` is the image of `i`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm {
    map: Vec<usize>,
}

impl Perm {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &x in &map {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::Validation(format!(
                    "{map:?} is not a permutation of 0..{n}"
                )));
            }
        }
        Ok(Self { map })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            map: (0..n).collect(),
        }
    }

    /// The rotation `c: i -> i + 1 (mod n)`.
    pub fn rotation(n: usize) -> Self {
        Self {
            map: (0..n).map(|i| (i + 1) % n).collect(),
        }
    }

    /// Reads vertex labels as images: `map[v] = labels[v] - 1`.
    pub fn from_arrangement(a: &Arrangement) -> Self {
        Self {
            map: a.labels().iter().map(|l| l - 1).collect(),
        }
    }

    pub fn to_arrangement(&self) -> Arrangement {
        Arrangement::from_labels_unchecked(self.map.iter().map(|x| x + 1).collect())
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// `self ∘ other`, i.e. `i -> self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Result<Perm> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch {
                expected: self.n(),
                actual: other.n(),
            });
        }
        Ok(Perm {
            map: other.map.iter().map(|&i| self.map[i]).collect(),
        })
    }

    /// `self ∘ c^j`, i.e. `i -> self(i + j)`.
    pub fn shifted(&self, j: usize) -> Perm {
        let n = self.n();
        Perm {
            map: (0..n).map(|i| self.map[(i + j) % n]).collect(),
        }
    }

    /// Cycle lengths, descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n()];
        let mut lengths = Vec::new();
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.map[i];
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }

    pub fn fixed_points(&self) -> usize {
        self.map
            .iter()
            .enumerate()
            .filter(|&(i, &x)| i == x)
            .count()
    }
}

/// Number of cycles, fixed points included.
pub fn cyc(p: &Perm) -> usize {
    cyc_of_shift(&p.map, 0)
}

/// Cycles of `i -> map[(i + j) mod n]` without materializing it.
fn cyc_of_shift(map: &[usize], j: usize) -> usize {
    let n = map.len();
    let mut seen = [0u64; 4];
    let mut big;
    let seen: &mut [u64] = if n <= 256 {
        &mut seen
    } else {
        big = vec![0u64; n.div_ceil(64)];
        &mut big
    };
    let mut cycles = 0;
    for start in 0..n {
        if seen[start / 64] >> (start % 64) & 1 == 1 {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while seen[i / 64] >> (i % 64) & 1 == 0 {
            seen[i / 64] |= 1 << (i % 64);
            let k = i + j;
            i = map[if k >= n { k - n } else { k }];
        }
    }
    cycles
}

/// Cycle counts over the coset of `labels` (as 1-based images), stopping
/// early once a shift reaches `stop_at` cycles. Returns the maximum seen.
fn max_coset_cycles(labels: &[usize], stop_at: usize) -> usize {
    let n = labels.len();
    let mut map = [0usize; 32];
    for (m, &l) in map.iter_mut().zip(labels) {
        *m = l - 1;
    }
    let mut best = 0;
    for j in 0..n {
        best = best.max(cyc_of_shift(&map[..n], j));
        if best >= stop_at {
            break;
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetReport {
    pub base: Perm,
    /// `cyc(base ∘ c^j)` for `j = 0..n`.
    pub shift_cycle_counts: Vec<usize>,
    pub t_value: usize,
}

impl CosetReport {
    /// Smallest shift attaining the maximum cycle count.
    pub fn best_shift(&self) -> usize {
        let max = self.shift_cycle_counts.iter().max().copied().unwrap_or(0);
        self.shift_cycle_counts
            .iter()
            .position(|&c| c == max)
            .unwrap_or(0)
    }
}

/// Sorting time of the class `[p]` under arbitrary swaps.
pub fn t_class(p: &Perm) -> CosetReport {
    let n = p.n();
    let counts: Vec<usize> = (0..n).map(|j| cyc_of_shift(&p.map, j)).collect();
    let t_value = n - counts.iter().max().copied().unwrap_or(n);
    CosetReport {
        base: p.clone(),
        shift_cycle_counts: counts,
        t_value,
    }
}

/// An optimal sequence of arbitrary swaps taking `a` to the trivial class.
///
/// Picks the coset element with the most cycles and undoes it one
/// transposition at a time, so the length equals `t_class`.
pub fn sort_all_swaps(a: &Arrangement) -> SwapSequence {
    let n = a.len();
    let pi = Perm::from_arrangement(a);
    let j = t_class(&pi).best_shift();
    // Target rotation c^(-j): vertex v should carry label ((v - j) mod n) + 1.
    let target = |v: usize| (v + n - j) % n + 1;
    let mut labels = a.labels().to_vec();
    let mut seq = SwapSequence::new(n);
    for v in 0..n {
        while labels[v] != target(v) {
            // send the label at v to where it belongs
            let home = (labels[v] - 1 + j) % n;
            labels.swap(v, home);
            seq.push(GenSwap::new(v, home).expect("distinct vertices"))
                .expect("in range");
        }
    }
    seq
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSource {
    /// `t(p) = p - 2` for primes.
    Prime,
    /// `t(p^k) >= p^k - k - 1`, odd `p`.
    PrimePower,
    /// `t(2 p^k) >= 2 p^k - 2k - 2`, odd `p`.
    #[serde(rename = "two_pk")]
    TwoPrimePower,
    /// `t(2^k) >= 2^k - 2k + 1`, `k >= 2`.
    TwoPower,
    /// `t(n) >= n - ceil(e (ln n + 1))`.
    General,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerBound {
    pub source: BoundSource,
    pub value: i64,
}

/// Every proven lower bound on `t(n)` that applies to `n`.
pub fn lower_bound_t(n: u64) -> Vec<LowerBound> {
    let mut out = Vec::new();
    let ni = n as i64;
    if is_prime(n) {
        out.push(LowerBound {
            source: BoundSource::Prime,
            value: ni - 2,
        });
    }
    if let Some((p, k)) = units::prime_power(n) {
        if p == 2 && k >= 2 {
            out.push(LowerBound {
                source: BoundSource::TwoPower,
                value: ni - 2 * k as i64 + 1,
            });
        } else if p != 2 {
            out.push(LowerBound {
                source: BoundSource::PrimePower,
                value: ni - k as i64 - 1,
            });
        }
    }
    if n.is_multiple_of(2) {
        if let Some((_, k)) = units::prime_power(n / 2).filter(|&(p, _)| p != 2) {
            out.push(LowerBound {
                source: BoundSource::TwoPrimePower,
                value: ni - 2 * k as i64 - 2,
            });
        }
    }
    if n >= 2 {
        out.push(LowerBound {
            source: BoundSource::General,
            value: general_lower_bound(n),
        });
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TnRecord {
    pub n: usize,
    pub t_n: usize,
    /// Lexicographically smallest canonical representative attaining `t_n`.
    pub argmax_class: Perm,
    pub lower_bounds: Vec<LowerBound>,
    pub is_prime: bool,
}

fn check_class_budget(n: usize, max_classes: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("circle needs at least one vertex".into()));
    }
    let required = factorial_u128(n - 1);
    if required > u128::from(max_classes) || n > 32 {
        return Err(Error::Budget {
            required,
            cap: max_classes,
        });
    }
    Ok(())
}

/// Exact `t(n)` by visiting all `(n-1)!` classes.
pub fn t_exhaustive(n: usize, max_classes: u64) -> Result<TnRecord> {
    check_class_budget(n, max_classes)?;
    // (best t, representative) per chunk; ties keep the earlier class.
    let (t_n, witness) = par_fold_classes(
        n,
        (0usize, None::<Vec<usize>>),
        |acc, labels| {
            let stop = n - acc.0;
            let max = max_coset_cycles(labels, if acc.1.is_some() { stop } else { n + 1 });
            let t = n - max;
            if acc.1.is_none() || t > acc.0 {
                *acc = (t, Some(labels.to_vec()));
            }
        },
        |a, b| match (&a.1, &b.1) {
            (None, _) => b,
            (Some(_), Some(_)) if b.0 > a.0 => b,
            _ => a,
        },
    );
    let witness = witness.expect("at least one class");
    Ok(TnRecord {
        n,
        t_n,
        argmax_class: Perm::from_arrangement(&Arrangement::from_labels_unchecked(witness)),
        lower_bounds: lower_bound_t(n as u64),
        is_prime: is_prime(n as u64),
    })
}

/// The permutation `i -> a i (mod n)` of `Z_n`.
pub fn mult_perm(n: usize, a: u64) -> Result<Perm> {
    if n == 0 {
        return Err(Error::Domain("modulus must be positive".into()));
    }
    let n64 = n as u64;
    if num_integer::gcd(a % n64, n64) != 1 {
        return Err(Error::Domain(format!("{a} is not a unit mod {n}")));
    }
    let a = a % n64;
    Ok(Perm {
        map: (0..n64)
            .map(|i| ((u128::from(a) * u128::from(i)) % u128::from(n64)) as usize)
            .collect(),
    })
}

/// Cycle counts of `π_{2p^k, g} ∘ c^j` for `j = 0` and `j = 1`, with `g`
/// the odd simultaneous generator.
pub fn shift_cycle_profile_2pk(p: u64, k: u32, max_points: usize) -> Result<(usize, usize)> {
    let g = odd_generator_2pk(p, k)?;
    let n = 2 * p
        .checked_pow(k)
        .ok_or_else(|| Error::Domain(format!("{p}^{k} overflows")))?;
    if n > max_points as u64 {
        return Err(Error::Budget {
            required: u128::from(n),
            cap: max_points as u64,
        });
    }
    let perm = mult_perm(n as usize, g)?;
    Ok((cyc_of_shift(&perm.map, 0), cyc_of_shift(&perm.map, 1)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeVerdict {
    pub n: usize,
    pub t_n: usize,
    pub is_prime: bool,
    /// `t(n) = n - 2`.
    pub attains_upper: bool,
    pub consistent: bool,
}

/// Compares `t(n) = n - 2` against primality for `2 <= n <= n_max`.
pub fn check_conjecture_prime(n_max: usize, max_classes: u64) -> Result<Vec<PrimeVerdict>> {
    (2..=n_max)
        .map(|n| {
            let rec = t_exhaustive(n, max_classes)?;
            let attains_upper = rec.t_n == n - 2;
            Ok(PrimeVerdict {
                n,
                t_n: rec.t_n,
                is_prime: rec.is_prime,
                attains_upper,
                consistent: attains_upper == rec.is_prime,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureVerdict {
    pub n: usize,
    /// Canonical classes whose coset has at most two cycles everywhere.
    pub flagged: Vec<Arrangement>,
    /// Every coset element of every flagged class has cycle type `(n-1, 1)`.
    pub lemma_holds: bool,
    /// Flagged classes exist only for prime `n` and are multiplicative.
    pub conjecture_holds: bool,
    pub counterexamples: Vec<Arrangement>,
}

/// Finds all classes with maximum coset cycle count 2 and checks the cycle
/// structure lemma and the multiplicative-form conjecture on them.
pub fn check_conjecture_structure(n: usize, max_classes: u64) -> Result<StructureVerdict> {
    if n <= 2 {
        return Err(Error::Domain(format!(
            "structure check needs n > 2, got {n}"
        )));
    }
    check_class_budget(n, max_classes)?;
    let flagged = par_fold_classes(
        n,
        Vec::new(),
        |acc: &mut Vec<Arrangement>, labels| {
            // Every coset has a shift with a fixed point, so the max is >= 2.
            if max_coset_cycles(labels, 3) == 2 {
                acc.push(Arrangement::from_labels_unchecked(labels.to_vec()));
            }
        },
        |mut a, b| {
            a.extend(b);
            a
        },
    );

    let lemma_holds = flagged.iter().all(|a| {
        let p = Perm::from_arrangement(a);
        (0..n).all(|j| {
            let s = p.shifted(j);
            s.cycle_type() == vec![n - 1, 1]
        })
    });

    let multiplicative: BTreeSet<Arrangement> = (1..n as u64)
        .filter(|&a| num_integer::gcd(a, n as u64) == 1)
        .map(|a| {
            mult_perm(n, a)
                .expect("unit")
                .to_arrangement()
                .canonicalize()
                .into_canon()
        })
        .collect();
    let prime = is_prime(n as u64);
    let counterexamples: Vec<Arrangement> = flagged
        .iter()
        .filter(|a| !prime || !multiplicative.contains(*a))
        .cloned()
        .collect();
    Ok(StructureVerdict {
        n,
        conjecture_holds: counterexamples.is_empty(),
        flagged,
        lemma_holds,
        counterexamples,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitRow {
    pub a: u64,
    pub order: u64,
    pub cyc: usize,
    pub t_value: usize,
    /// `t` of the class in `S_{n+1}` obtained by adding a fixed point.
    pub extended_t_value: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicativeReport {
    pub n: usize,
    pub rows: Vec<UnitRow>,
}

impl MultiplicativeReport {
    pub fn row(&self, a: u64) -> Option<&UnitRow> {
        self.rows.iter().find(|r| r.a == a)
    }
}

/// Extends `π_{n,a}` to `S_{n+1}`: points `1..=n` follow `i -> a i` with
/// `n` read as residue 0, and point `n + 1` is fixed.
pub fn mult_perm_with_fixed_point(n: usize, a: u64) -> Result<Perm> {
    let base = mult_perm(n, a)?;
    // 0-based point q stands for 1-based point q + 1, i.e. residue (q + 1) mod n.
    let mut map: Vec<usize> = (0..n)
        .map(|q| {
            let image = base.map[(q + 1) % n];
            (image + n - 1) % n
        })
        .collect();
    map.push(n);
    Perm::new(map)
}

/// `t([π_{n,a}])` for every unit `a`, with and without an extra fixed point.
pub fn multiplicative_report(n: usize) -> Result<MultiplicativeReport> {
    let rows = (1..n as u64)
        .filter(|&a| num_integer::gcd(a, n as u64) == 1)
        .map(|a| {
            let p = mult_perm(n, a)?;
            Ok(UnitRow {
                a,
                order: multiplicative_order(a, n as u64).expect("unit"),
                cyc: cyc(&p),
                t_value: t_class(&p).t_value,
                extended_t_value: t_class(&mult_perm_with_fixed_point(n, a)?).t_value,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MultiplicativeReport { n, rows })
}
