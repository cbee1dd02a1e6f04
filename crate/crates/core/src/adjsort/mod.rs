//! Constructive adjacent-swap sorter for cyclic permutations.
//!
//! Labels are split into "small" and "large" halves. The circle is cut into
//! two arcs with a prescribed number of small labels each. Two competing
//! processes then push the small labels of both arcs either towards the
//! shared top boundary or towards the shared bottom boundary, after which the
//! small block and the large block are each sorted on a path. The shift costs
//! of the two processes always sum to a fixed amount, and cross-arc pairs are
//! inverted in exactly one of them, so the cheaper process stays within
//! `floor((n-1)^2 / 4)` swaps.

mod lower;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arrangement::{inversions, AdjSwap, Arrangement, SwapSequence};
use crate::error::{Error, Result};

pub use lower::{circular_distance, gap_multiset, n_lower_table, w_perm};

/// `floor((n-1)^2 / 4)`, the diameter of the adjacent-swap graph on cyclic permutations.
pub fn f_formula(n: u64) -> u64 {
    let d = n.saturating_sub(1);
    d * d / 4
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    /// n = 4m
    A,
    /// n = 4m + 2
    B,
    /// n = 4m + 1
    C,
    /// n = 4m + 3
    D,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CaseTag {
    pub case: Case,
    pub m: usize,
}

impl CaseTag {
    pub fn n(&self) -> usize {
        4 * self.m
            + match self.case {
                Case::A => 0,
                Case::B => 2,
                Case::C => 1,
                Case::D => 3,
            }
    }

    /// Largest small label; labels `1..=threshold` are small.
    pub fn small_threshold(&self) -> usize {
        let m = self.m;
        match self.case {
            Case::A | Case::C => 2 * m,
            Case::B => 2 * m + 1,
            Case::D => 2 * m + 2,
        }
    }

    pub fn a1_len(&self) -> usize {
        let m = self.m;
        match self.case {
            Case::A | Case::C => 2 * m,
            Case::B | Case::D => 2 * m + 1,
        }
    }

    /// Required `(small in A1, large in A1, small in A2, large in A2)`.
    pub fn required_counts(&self) -> SplitCounts {
        let m = self.m;
        let (s1, l1, s2, l2) = match self.case {
            Case::A => (m, m, m, m),
            Case::B => (m, m + 1, m + 1, m),
            Case::C => (m, m, m, m + 1),
            Case::D => (m + 1, m, m + 1, m + 1),
        };
        SplitCounts {
            small1: s1,
            large1: l1,
            small2: s2,
            large2: l2,
        }
    }

    /// Combined shift cost of the two processes, identical for every input.
    pub fn shift_total(&self) -> u64 {
        let m = self.m as u64;
        match self.case {
            Case::A => 2 * m * m,
            Case::B => 2 * m * (m + 1),
            Case::C => 2 * m * m + m,
            Case::D => 2 * m * m + 3 * m + 1,
        }
    }

    /// Upper bound on the combined residual cost of the two processes.
    pub fn residual_bound(&self) -> u64 {
        let m = self.m as u64;
        match self.case {
            Case::A => (6 * m * m).saturating_sub(4 * m),
            Case::B => 6 * m * m + 2 * m,
            Case::C => (6 * m * m).saturating_sub(m),
            Case::D => 6 * m * m + 5 * m + 1,
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}(m={})", self.case, self.m)
    }
}

pub fn case_of(n: usize) -> CaseTag {
    assert!(n >= 1, "circle needs at least one vertex");
    let m = n / 4;
    let case = match n % 4 {
        0 => Case::A,
        1 => Case::C,
        2 => Case::B,
        _ => Case::D,
    };
    CaseTag { case, m }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplitCounts {
    pub small1: usize,
    pub large1: usize,
    pub small2: usize,
    pub large2: usize,
}

/// Partition of the circle into the arc `A1` (clockwise from `a1_start`)
/// and its complement `A2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcSplit {
    pub case: CaseTag,
    pub a1_start: usize,
    pub a1_len: usize,
    pub a2_len: usize,
    pub small_threshold: usize,
    pub counts: SplitCounts,
}

impl ArcSplit {
    pub fn n(&self) -> usize {
        self.a1_len + self.a2_len
    }

    pub fn a2_start(&self) -> usize {
        (self.a1_start + self.a1_len) % self.n()
    }

    fn measure(a: &Arrangement, start: usize, len: usize, threshold: usize) -> (usize, usize) {
        let n = a.len();
        let small = (0..len)
            .filter(|q| a.labels()[(start + q) % n] <= threshold)
            .count();
        (small, len - small)
    }

    fn validate(&self, a: &Arrangement) -> Result<()> {
        let n = a.len();
        if self.n() != n || self.case != case_of(n) || self.a1_start >= n {
            return Err(Error::Validation(format!(
                "split does not fit a circle of size {n}"
            )));
        }
        let (s1, l1) = Self::measure(a, self.a1_start, self.a1_len, self.small_threshold);
        let (s2, l2) = Self::measure(a, self.a2_start(), self.a2_len, self.small_threshold);
        let actual = SplitCounts {
            small1: s1,
            large1: l1,
            small2: s2,
            large2: l2,
        };
        if actual != self.counts || actual != self.case.required_counts() {
            return Err(Error::Validation(format!(
                "split counts {:?} do not match arrangement ({actual:?})",
                self.counts
            )));
        }
        Ok(())
    }
}

/// Finds the first clockwise window (scanning from vertex 0) that can serve
/// as `A1`.
///
/// For `n = 4m + 3` the windows are restricted to those avoiding the vertex
/// that carries label `n`.
pub fn find_balanced_split(a: &Arrangement) -> Result<ArcSplit> {
    let n = a.len();
    if n < 4 {
        return Err(Error::Domain(format!(
            "balanced split needs n >= 4, got {n}"
        )));
    }
    let case = case_of(n);
    let threshold = case.small_threshold();
    let len = case.a1_len();
    let want = case.required_counts();
    let excluded = match case.case {
        Case::D => a.position_of(n),
        _ => None,
    };
    let small = |v: usize| usize::from(a.labels()[v % n] <= threshold);

    let mut count: usize = (0..len).map(small).sum();
    for start in 0..n {
        if start > 0 {
            count = count + small(start + len - 1) - small(start - 1);
        }
        let avoids = excluded.is_none_or(|x| (x + n - start) % n >= len);
        if count == want.small1 && avoids {
            let split = ArcSplit {
                case,
                a1_start: start,
                a1_len: len,
                a2_len: n - len,
                small_threshold: threshold,
                counts: want,
            };
            debug_assert!(split.validate(a).is_ok());
            return Ok(split);
        }
    }
    Err(Error::Internal(format!("no balanced arc found for {a}")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Small labels gather at the boundary where `A1` ends and `A2` begins.
    Top,
    /// Small labels gather at the boundary where `A2` ends and `A1` begins.
    Bottom,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcessPlan {
    pub direction: Direction,
    pub shift_cost: u64,
    pub residual_cost: u64,
    pub shift_moves: SwapSequence,
    pub residual_moves: SwapSequence,
    /// Arrangement after the shift phase, before residual sorting.
    pub after_shift: Arrangement,
}

impl ProcessPlan {
    pub fn total_cost(&self) -> u64 {
        self.shift_cost + self.residual_cost
    }

    pub fn moves(&self) -> SwapSequence {
        let mut seq = self.shift_moves.clone();
        seq.extend_from(&self.residual_moves).expect("same circle");
        seq
    }
}

/// Vertex-level view of one arc being rearranged in place.
struct Workspace {
    labels: Vec<usize>,
    seq: SwapSequence,
}

impl Workspace {
    fn n(&self) -> usize {
        self.labels.len()
    }

    fn swap_at(&mut self, v: usize) {
        let n = self.n();
        let v = v % n;
        self.labels.swap(v, (v + 1) % n);
        self.seq.push(AdjSwap::new(v)).expect("vertex in range");
    }

    fn get(&self, v: usize) -> usize {
        self.labels[v % self.n()]
    }

    /// Slides the small labels of the arc `start..start+len` to one end of
    /// it, preserving their relative order. Returns the number of swaps.
    fn gather_smalls(&mut self, start: usize, len: usize, threshold: usize, to_end: bool) -> u64 {
        let smalls: Vec<usize> = (0..len)
            .filter(|&q| self.get(start + q) <= threshold)
            .collect();
        let r = smalls.len();
        let mut cost = 0;
        if to_end {
            // The last small moves first so every path is clear of other smalls.
            for (i, &p) in smalls.iter().enumerate().rev() {
                let dest = len - r + i;
                for q in p..dest {
                    self.swap_at(start + q);
                }
                cost += (dest - p) as u64;
            }
        } else {
            for (i, &p) in smalls.iter().enumerate() {
                for q in (i..p).rev() {
                    self.swap_at(start + q);
                }
                cost += (p - i) as u64;
            }
        }
        cost
    }

    /// Sorts the path `start..start+len` ascending with adjacent exchanges.
    fn sort_path(&mut self, start: usize, len: usize) {
        for i in 1..len {
            let mut j = i;
            while j > 0 && self.get(start + j - 1) > self.get(start + j) {
                self.swap_at(start + j - 1);
                j -= 1;
            }
        }
    }

    fn path(&self, start: usize, len: usize) -> Vec<usize> {
        (0..len).map(|q| self.get(start + q)).collect()
    }
}

/// Runs one of the two processes on `a` and records its swaps and costs.
pub fn plan(a: &Arrangement, split: &ArcSplit, direction: Direction) -> Result<ProcessPlan> {
    split.validate(a)?;
    let n = a.len();
    let t = split.small_threshold;
    let (s1, s2) = (split.counts.small1, split.counts.small2);

    let mut ws = Workspace {
        labels: a.labels().to_vec(),
        seq: SwapSequence::new(n),
    };
    let top = direction == Direction::Top;
    let shift_cost = ws.gather_smalls(split.a1_start, split.a1_len, t, top)
        + ws.gather_smalls(split.a2_start(), split.a2_len, t, !top);
    let shift_moves = std::mem::replace(&mut ws.seq, SwapSequence::new(n));
    let after_shift = Arrangement::from_labels_unchecked(ws.labels.clone());

    let small_start = match direction {
        Direction::Top => split.a1_start + split.a1_len - s1,
        Direction::Bottom => split.a1_start + n - s2,
    };
    let large_start = small_start + t;
    let small_target: Vec<usize> = (1..=t).collect();
    let large_target: Vec<usize> = (t + 1..=n).collect();
    let residual_cost = inversions(&ws.path(small_start, t), &small_target)
        .and_then(|s| Ok(s + inversions(&ws.path(large_start, n - t), &large_target)?))
        .map_err(|e| Error::Internal(format!("blocks not formed after shift: {e}")))?;
    ws.sort_path(small_start, t);
    ws.sort_path(large_start, n - t);
    let residual_moves = ws.seq;

    if shift_moves.len() as u64 != shift_cost || residual_moves.len() as u64 != residual_cost {
        return Err(Error::Internal(
            "emitted moves disagree with cost accounting".into(),
        ));
    }
    Ok(ProcessPlan {
        direction,
        shift_cost,
        residual_cost,
        shift_moves,
        residual_moves,
        after_shift,
    })
}

/// Full record of one run of the constructive sorter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SortOutcome {
    pub case: CaseTag,
    /// `None` when the circle is too small for the arc machinery.
    pub split: Option<ArcSplit>,
    pub top: Option<ProcessPlan>,
    pub bottom: Option<ProcessPlan>,
    pub chosen: Option<Direction>,
    pub sequence: SwapSequence,
}

/// Sorts `a` into the trivial cyclic permutation with at most
/// `f_formula(n)` adjacent swaps.
pub fn sort_cyclic(a: &Arrangement) -> SwapSequence {
    sort_cyclic_detailed(a).sequence
}

pub fn sort_cyclic_detailed(a: &Arrangement) -> SortOutcome {
    let n = a.len();
    let case = case_of(n);
    if n <= 3 {
        return SortOutcome {
            case,
            split: None,
            top: None,
            bottom: None,
            chosen: None,
            sequence: shortest_sort_small(a),
        };
    }
    // A missing split or a failing plan would be a bug in this module.
    let split = find_balanced_split(a).unwrap_or_else(|e| panic!("{e}"));
    let top = plan(a, &split, Direction::Top).unwrap_or_else(|e| panic!("{e}"));
    let bottom = plan(a, &split, Direction::Bottom).unwrap_or_else(|e| panic!("{e}"));
    let chosen = if top.total_cost() <= bottom.total_cost() {
        Direction::Top
    } else {
        Direction::Bottom
    };
    let sequence = match chosen {
        Direction::Top => top.moves(),
        Direction::Bottom => bottom.moves(),
    };
    SortOutcome {
        case,
        split: Some(split),
        top: Some(top),
        bottom: Some(bottom),
        chosen: Some(chosen),
        sequence,
    }
}

/// Breadth-first search over arrangements; only used for tiny circles.
fn shortest_sort_small(a: &Arrangement) -> SwapSequence {
    let n = a.len();
    let mut parent: HashMap<Arrangement, Option<(Arrangement, usize)>> =
        HashMap::from([(a.clone(), None)]);
    let mut queue = VecDeque::from([a.clone()]);
    while let Some(cur) = queue.pop_front() {
        if cur.is_trivial_class() {
            let mut moves = Vec::new();
            let mut node = cur;
            while let Some((prev, pos)) = parent[&node].clone() {
                moves.push(AdjSwap::new(pos).into());
                node = prev;
            }
            moves.reverse();
            return SwapSequence::from_moves(n, moves).expect("positions in range");
        }
        // For n = 2 both positions name the same pair.
        let positions = if n == 2 { 1 } else { n };
        for pos in 0..positions {
            let next = cur.apply(AdjSwap::new(pos)).expect("position in range");
            if !parent.contains_key(&next) {
                parent.insert(next.clone(), Some((cur.clone(), pos)));
                queue.push_back(next);
            }
        }
    }
    unreachable!("adjacent swaps connect every arrangement")
}
