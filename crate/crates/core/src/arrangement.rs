//! Labelings of circle vertices, rotation classes and swap moves.
//!
//! Vertices are numbered `0..n` clockwise and carry the labels `1..=n`.
//! Vertex `n - 1` is adjacent to vertex `0`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A concrete labeling of the `n` vertices of a circle by `1..=n`.
///
/// `labels()[v]` is the label sitting on vertex `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Arrangement {
    labels: Vec<usize>,
}

impl Arrangement {
    /// Validates that `labels` is a bijection onto `1..=labels.len()`.
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Validation(
                "arrangement must have at least one vertex".into(),
            ));
        }
        let mut seen = vec![false; n];
        for &l in &labels {
            if l == 0 || l > n {
                return Err(Error::Validation(format!("label {l} outside 1..={n}")));
            }
            if std::mem::replace(&mut seen[l - 1], true) {
                return Err(Error::Validation(format!("label {l} appears twice")));
            }
        }
        Ok(Self { labels })
    }

    pub(crate) fn from_labels_unchecked(labels: Vec<usize>) -> Self {
        debug_assert!(Self::new(labels.clone()).is_ok());
        Self { labels }
    }

    /// The arrangement `1, 2, ..., n`.
    pub fn trivial(n: usize) -> Self {
        assert!(n >= 1, "circle needs at least one vertex");
        Self {
            labels: (1..=n).collect(),
        }
    }

    /// The arrangement `n, n-1, ..., 1`.
    pub fn reversal(n: usize) -> Self {
        assert!(n >= 1, "circle needs at least one vertex");
        Self {
            labels: (1..=n).rev().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn into_labels(self) -> Vec<usize> {
        self.labels
    }

    /// Vertex currently holding `label`.
    pub fn position_of(&self, label: usize) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    /// Rotation that moves the label on vertex `r` to vertex 0.
    pub fn rotate(&self, r: usize) -> Self {
        let n = self.len();
        let r = r % n;
        let mut labels = Vec::with_capacity(n);
        labels.extend_from_slice(&self.labels[r..]);
        labels.extend_from_slice(&self.labels[..r]);
        Self { labels }
    }

    pub fn canonicalize(&self) -> CyclicPerm {
        let zero = self
            .labels
            .iter()
            .position(|&l| l == 1)
            .expect("label 1 present");
        CyclicPerm {
            canon: self.rotate(zero),
        }
    }

    /// True if the arrangement is a rotation of `1, 2, ..., n`.
    pub fn is_trivial_class(&self) -> bool {
        let n = self.len();
        self.labels.windows(2).all(|w| w[1] == w[0] % n + 1)
    }

    /// Exchanges the labels on the two vertices named by `swap`.
    pub fn apply(&self, swap: impl Into<Swap>) -> Result<Self> {
        let mut out = self.clone();
        out.apply_in_place(swap)?;
        Ok(out)
    }

    pub fn apply_in_place(&mut self, swap: impl Into<Swap>) -> Result<()> {
        let (a, b) = swap.into().vertices(self.len())?;
        self.labels.swap(a, b);
        Ok(())
    }

    /// Applies every move of `seq`, left to right.
    pub fn replay(&self, seq: &SwapSequence) -> Result<Self> {
        if seq.n() != self.len() {
            return Err(Error::SizeMismatch {
                expected: self.len(),
                actual: seq.n(),
            });
        }
        let mut out = self.clone();
        for &mv in seq.moves() {
            out.apply_in_place(mv)?;
        }
        Ok(out)
    }
}

impl TryFrom<Vec<usize>> for Arrangement {
    type Error = Error;

    fn try_from(labels: Vec<usize>) -> Result<Self> {
        Self::new(labels)
    }
}

impl From<Arrangement> for Vec<usize> {
    fn from(a: Arrangement) -> Self {
        a.labels
    }
}

impl FromStr for Arrangement {
    type Err = Error;

    /// Parses space-separated labels, vertex 0 first (e.g. `"5 4 3 2 1"`).
    fn from_str(s: &str) -> Result<Self> {
        let labels = s
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| Error::Validation(format!("not a label: {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(labels)
    }
}

impl fmt::Display for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.labels.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A cyclic permutation: an arrangement up to rotation.
///
/// Stored as the unique rotation that puts label 1 on vertex 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclicPerm {
    canon: Arrangement,
}

impl CyclicPerm {
    pub fn trivial(n: usize) -> Self {
        Self {
            canon: Arrangement::trivial(n),
        }
    }

    pub fn canon(&self) -> &Arrangement {
        &self.canon
    }

    pub fn into_canon(self) -> Arrangement {
        self.canon
    }

    pub fn len(&self) -> usize {
        self.canon.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_trivial(&self) -> bool {
        self.canon
            .labels
            .iter()
            .enumerate()
            .all(|(v, &l)| l == v + 1)
    }
}

impl From<&Arrangement> for CyclicPerm {
    fn from(a: &Arrangement) -> Self {
        a.canonicalize()
    }
}

impl fmt::Display for CyclicPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.canon)
    }
}

/// Swap of the labels on vertices `pos` and `(pos + 1) mod n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AdjSwap {
    pub pos: usize,
}

impl AdjSwap {
    pub fn new(pos: usize) -> Self {
        Self { pos }
    }
}

/// Swap of the labels on two arbitrary distinct vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GenSwap {
    a: usize,
    b: usize,
}

impl GenSwap {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::Validation(format!("swap of vertex {a} with itself")));
        }
        Ok(Self {
            a: a.min(b),
            b: a.max(b),
        })
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SwapKind {
    Adjacent,
    General,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Swap {
    Adj(AdjSwap),
    Gen(GenSwap),
}

impl Swap {
    pub fn kind(&self) -> SwapKind {
        match self {
            Swap::Adj(_) => SwapKind::Adjacent,
            Swap::Gen(_) => SwapKind::General,
        }
    }

    /// The two vertices exchanged on a circle of size `n`.
    pub fn vertices(&self, n: usize) -> Result<(usize, usize)> {
        match *self {
            Swap::Adj(AdjSwap { pos }) => {
                if pos >= n {
                    return Err(Error::OutOfRange { index: pos, n });
                }
                Ok((pos, (pos + 1) % n))
            }
            Swap::Gen(GenSwap { a, b }) => {
                if b >= n {
                    return Err(Error::OutOfRange { index: b, n });
                }
                Ok((a, b))
            }
        }
    }
}

impl From<AdjSwap> for Swap {
    fn from(s: AdjSwap) -> Self {
        Swap::Adj(s)
    }
}

impl From<GenSwap> for Swap {
    fn from(s: GenSwap) -> Self {
        Swap::Gen(s)
    }
}

/// An ordered list of moves of one kind on a circle of fixed size.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapSequence {
    n: usize,
    moves: Vec<Swap>,
}

impl SwapSequence {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            moves: Vec::new(),
        }
    }

    pub fn from_moves(n: usize, moves: impl IntoIterator<Item = Swap>) -> Result<Self> {
        let mut seq = Self::new(n);
        for mv in moves {
            seq.push(mv)?;
        }
        Ok(seq)
    }

    pub fn push(&mut self, mv: impl Into<Swap>) -> Result<()> {
        let mv = mv.into();
        mv.vertices(self.n)?;
        if let Some(first) = self.moves.first() {
            if first.kind() != mv.kind() {
                return Err(Error::Validation(
                    "cannot mix adjacent and general swaps".into(),
                ));
            }
        }
        self.moves.push(mv);
        Ok(())
    }

    /// Appends all moves of `other`, which must live on the same circle.
    pub fn extend_from(&mut self, other: &SwapSequence) -> Result<()> {
        if other.n != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        for &mv in &other.moves {
            self.push(mv)?;
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn moves(&self) -> &[Swap] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn kind(&self) -> Option<SwapKind> {
        self.moves.first().map(Swap::kind)
    }

    pub fn reversed(&self) -> Self {
        Self {
            n: self.n,
            moves: self.moves.iter().rev().copied().collect(),
        }
    }

    /// Vertex pairs of every move, in order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.moves
            .iter()
            .map(|mv| mv.vertices(self.n).expect("validated on push"))
            .collect()
    }
}

/// Number of pairs of `observed` that appear in the opposite order in `target`.
///
/// This is the minimum number of adjacent swaps that turn `observed` into
/// `target` on a path.
pub fn inversions(observed: &[usize], target: &[usize]) -> Result<u64> {
    if observed.len() != target.len() {
        return Err(Error::SizeMismatch {
            expected: target.len(),
            actual: observed.len(),
        });
    }
    let mut sorted: Vec<(usize, usize)> = target.iter().enumerate().map(|(r, &l)| (l, r)).collect();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::Validation("target order repeats a label".into()));
    }
    let ranks = observed
        .iter()
        .map(|l| {
            sorted
                .binary_search_by_key(l, |&(k, _)| k)
                .map(|i| sorted[i].1)
                .map_err(|_| Error::Validation(format!("label {l} not in target order")))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut seen = vec![false; ranks.len()];
    for &r in &ranks {
        if std::mem::replace(&mut seen[r], true) {
            return Err(Error::Validation(
                "observed sequence repeats a label".into(),
            ));
        }
    }
    Ok(count_inversions(&ranks))
}

/// Inversions of `xs` relative to ascending order, by merge sort.
pub fn count_inversions<T: Ord + Clone>(xs: &[T]) -> u64 {
    fn go<T: Ord + Clone>(xs: &mut [T], buf: &mut Vec<T>) -> u64 {
        let len = xs.len();
        if len < 2 {
            return 0;
        }
        let mid = len / 2;
        let mut count = go(&mut xs[..mid], buf) + go(&mut xs[mid..], buf);
        buf.clear();
        let (mut i, mut j) = (0, mid);
        while i < mid && j < len {
            if xs[j] < xs[i] {
                count += (mid - i) as u64;
                buf.push(xs[j].clone());
                j += 1;
            } else {
                buf.push(xs[i].clone());
                i += 1;
            }
        }
        buf.extend_from_slice(&xs[i..mid]);
        buf.extend_from_slice(&xs[j..]);
        xs.clone_from_slice(buf);
        count
    }
    let mut work = xs.to_vec();
    go(&mut work, &mut Vec::with_capacity(xs.len()))
}

#[cfg(test)]
mod tests {
    use std::collections::{HashMap, VecDeque};

    use proptest::prelude::*;

    use super::*;

    fn arr(s: &str) -> Arrangement {
        s.parse().unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(arr("1 2 3").canonicalize().canon(), &arr("1 2 3"));
        assert_eq!(arr("3 1 2").canonicalize().canon(), &arr("1 2 3"));
        assert_eq!(arr("2 1 3").canonicalize().canon(), &arr("1 3 2"));
    }

    #[test]
    fn rejects_bad_labels() {
        assert!(matches!(
            Arrangement::new(vec![]),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            Arrangement::new(vec![1, 1, 2]),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            Arrangement::new(vec![0, 1]),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            Arrangement::new(vec![1, 4, 2]),
            Err(Error::Validation(_))
        ));
        assert!("1 x 2".parse::<Arrangement>().is_err());
    }

    #[test]
    fn apply_examples() {
        let a = arr("1 2 3 4");
        assert_eq!(a.apply(AdjSwap::new(0)).unwrap(), arr("2 1 3 4"));
        assert_eq!(a.apply(AdjSwap::new(3)).unwrap(), arr("4 2 3 1"));
        assert_eq!(
            a.apply(GenSwap::new(0, 2).unwrap()).unwrap(),
            arr("3 2 1 4")
        );
        assert!(matches!(
            a.apply(AdjSwap::new(4)),
            Err(Error::OutOfRange { index: 4, n: 4 })
        ));
        assert!(a.apply(GenSwap::new(1, 9).unwrap()).is_err());
        assert!(GenSwap::new(2, 2).is_err());
    }

    #[test]
    fn replay_examples() {
        let a = arr("2 1 3");
        assert_eq!(a.replay(&SwapSequence::new(3)).unwrap(), a);
        let seq = SwapSequence::from_moves(3, [AdjSwap::new(0).into()]).unwrap();
        assert_eq!(a.replay(&seq).unwrap(), arr("1 2 3"));
        assert!(matches!(
            a.replay(&SwapSequence::new(4)),
            Err(Error::SizeMismatch {
                expected: 3,
                actual: 4
            })
        ));
    }

    #[test]
    fn sequences_are_homogeneous() {
        let mut seq = SwapSequence::new(5);
        seq.push(AdjSwap::new(1)).unwrap();
        assert!(seq.push(GenSwap::new(0, 3).unwrap()).is_err());
        assert!(seq.push(AdjSwap::new(5)).is_err());
        assert_eq!(seq.pairs(), vec![(1, 2)]);
    }

    #[test]
    fn inversion_examples() {
        assert_eq!(inversions(&[1, 2, 3], &[1, 2, 3]).unwrap(), 0);
        assert_eq!(inversions(&[3, 2, 1], &[1, 2, 3]).unwrap(), 3);
        assert_eq!(inversions(&[2, 1, 3], &[1, 2, 3]).unwrap(), 1);
        assert_eq!(inversions(&[7, 5], &[7, 5]).unwrap(), 0);
        assert!(inversions(&[1, 2, 4], &[1, 2, 3]).is_err());
        assert!(inversions(&[1, 1, 2], &[1, 2, 3]).is_err());
        assert!(inversions(&[1, 2], &[1, 2, 3]).is_err());
    }

    /// Minimum adjacent swaps on a path, by BFS over all orderings.
    fn path_sort_distance(start: &[usize]) -> u64 {
        let mut target = start.to_vec();
        target.sort_unstable();
        let mut dist: HashMap<Vec<usize>, u64> = HashMap::from([(start.to_vec(), 0)]);
        let mut queue = VecDeque::from([start.to_vec()]);
        while let Some(cur) = queue.pop_front() {
            let d = dist[&cur];
            if cur == target {
                return d;
            }
            for i in 0..cur.len() - 1 {
                let mut next = cur.clone();
                next.swap(i, i + 1);
                dist.entry(next.clone()).or_insert_with(|| {
                    queue.push_back(next);
                    d + 1
                });
            }
        }
        unreachable!()
    }

    proptest! {
        #[test]
        fn canonical_form_is_rotation_invariant(
            labels in (1usize..12).prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle()),
            r in 0usize..20,
        ) {
            let a = Arrangement::new(labels).unwrap();
            let c = a.canonicalize();
            prop_assert_eq!(c.canon().labels()[0], 1);
            prop_assert_eq!(&a.rotate(r).canonicalize(), &c);
            prop_assert_eq!(&c.canon().canonicalize(), &c);
            prop_assert_eq!(a.is_trivial_class(), c.is_trivial());
        }

        #[test]
        fn swaps_are_involutions(
            labels in (2usize..12).prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle()),
            i in 0usize..64, j in 0usize..64,
        ) {
            let a = Arrangement::new(labels).unwrap();
            let n = a.len();
            let adj = AdjSwap::new(i % n);
            prop_assert_eq!(a.apply(adj).unwrap().apply(adj).unwrap(), a.clone());
            if i % n != j % n {
                let g = GenSwap::new(i % n, j % n).unwrap();
                let once = a.apply(g).unwrap();
                let diff = (0..n).filter(|&v| once.labels()[v] != a.labels()[v]).count();
                prop_assert_eq!(diff, 2);
                prop_assert_eq!(once.apply(g).unwrap(), a);
            }
        }

        #[test]
        fn sequence_then_reverse_is_identity(
            labels in (2usize..10).prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle()),
            raw in prop::collection::vec(0usize..10, 0..30),
        ) {
            let a = Arrangement::new(labels).unwrap();
            let n = a.len();
            let seq = SwapSequence::from_moves(n, raw.iter().map(|&p| AdjSwap::new(p % n).into())).unwrap();
            let mut both = seq.clone();
            both.extend_from(&seq.reversed()).unwrap();
            prop_assert_eq!(a.replay(&both).unwrap(), a);
        }

        #[test]
        fn inversions_match_path_bfs(
            xs in (1usize..=7).prop_flat_map(|m| Just((1..=m).collect::<Vec<_>>()).prop_shuffle()),
        ) {
            let mut sorted = xs.clone();
            sorted.sort_unstable();
            let inv = inversions(&xs, &sorted).unwrap();
            prop_assert_eq!(inv, path_sort_distance(&xs));
            prop_assert_eq!(inv == 0, xs == sorted);
        }
    }
}
