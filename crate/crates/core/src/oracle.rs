//! Exact breadth-first search over cyclic permutations (or, in affine mode,
//! linear permutations) from the trivial element.
//!
//! States are ranked in the factorial number system and distances are kept
//! in a flat `u8` array indexed by rank; the array doubles as the visited set.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU8, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adjsort::w_perm;
use crate::arrangement::Arrangement;
use crate::enumerate::{factorial_table, factorial_u128, rank, unrank};
use crate::error::{Error, Result};

const UNVISITED: u8 = u8::MAX;
const MAGIC: &[u8; 4] = b"CSRT";
const CACHE_VERSION: u16 = 1;
const HEADER_LEN: usize = 4 + 2 + 2 + 1;
/// Largest circle the packed state encoding supports.
pub const MAX_N: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Cyclic permutations under adjacent swaps.
    Adjacent,
    /// Cyclic permutations under arbitrary swaps.
    AllSwap,
    /// Linear permutations under `(1,2), ..., (n-1,n), (n,1)`.
    Affine,
}

impl Mode {
    fn tag(self) -> u8 {
        match self {
            Mode::Adjacent => 0,
            Mode::AllSwap => 1,
            Mode::Affine => 2,
        }
    }

    fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            0 => Some(Mode::Adjacent),
            1 => Some(Mode::AllSwap),
            2 => Some(Mode::Affine),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Adjacent => "adjacent",
            Mode::AllSwap => "allswap",
            Mode::Affine => "affine",
        }
    }

    fn is_class_mode(self) -> bool {
        self != Mode::Affine
    }

    fn generators(self, n: usize) -> Vec<(usize, usize)> {
        match self {
            Mode::Adjacent | Mode::Affine if n <= 2 => {
                (0..n.saturating_sub(1)).map(|v| (v, v + 1)).collect()
            }
            Mode::Adjacent | Mode::Affine => (0..n).map(|v| (v, (v + 1) % n)).collect(),
            Mode::AllSwap => (0..n)
                .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                .collect(),
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adjacent" => Ok(Mode::Adjacent),
            "allswap" => Ok(Mode::AllSwap),
            "affine" => Ok(Mode::Affine),
            _ => Err(Error::Validation(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_states: u64,
    /// Directory holding cached tables; `None` disables persistence.
    pub cache_path: Option<PathBuf>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            max_states: 500_000_000,
            cache_path: None,
        }
    }
}

impl SearchConfig {
    pub fn with_max_states(max_states: u64) -> Self {
        Self {
            max_states: max_states.max(1),
            ..Self::default()
        }
    }
}

/// Number of states searched for `(n, mode)`.
pub fn state_count(n: usize, mode: Mode) -> u128 {
    match mode {
        Mode::Affine => factorial_u128(n),
        _ => factorial_u128(n.saturating_sub(1)),
    }
}

/// Exact distances from the trivial element for every state of one size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceTable {
    n: usize,
    mode: Mode,
    dist: Vec<u8>,
    histogram: Vec<u64>,
}

impl DistanceTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    /// Number of states at each distance, index = distance.
    pub fn histogram(&self) -> &[u64] {
        &self.histogram
    }

    pub fn diameter(&self) -> u32 {
        (self.histogram.len() - 1) as u32
    }

    pub fn raw(&self) -> &[u8] {
        &self.dist
    }

    /// Distance of `a`'s class (or of `a` itself, in affine mode).
    pub fn distance_of(&self, a: &Arrangement) -> Result<u32> {
        if a.len() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                actual: a.len(),
            });
        }
        let r = state_rank(a, self.mode, &factorial_table(self.n));
        Ok(u32::from(self.dist[r as usize]))
    }

    /// Every state paired with its distance, in rank order.
    pub fn entries(&self) -> impl Iterator<Item = (Arrangement, u32)> + '_ {
        let fact = factorial_table(self.n);
        self.dist.iter().enumerate().map(move |(r, &d)| {
            (
                state_unrank(r as u64, self.n, self.mode, &fact),
                u32::from(d),
            )
        })
    }

    fn from_dist(n: usize, mode: Mode, dist: Vec<u8>) -> Result<Self> {
        if dist.len() as u128 != state_count(n, mode) {
            return Err(Error::Cache(format!(
                "expected {} entries, found {}",
                state_count(n, mode),
                dist.len()
            )));
        }
        if dist.first() != Some(&0) {
            return Err(Error::Cache("trivial element must have distance 0".into()));
        }
        if dist.contains(&UNVISITED) {
            return Err(Error::Cache("table contains unreached states".into()));
        }
        let max = *dist.iter().max().expect("non-empty") as usize;
        let mut histogram = vec![0u64; max + 1];
        for &d in &dist {
            histogram[d as usize] += 1;
        }
        debug_assert_eq!(histogram.iter().sum::<u64>(), dist.len() as u64);
        Ok(Self {
            n,
            mode,
            dist,
            histogram,
        })
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&CACHE_VERSION.to_le_bytes())?;
        w.write_all(&(self.n as u16).to_le_bytes())?;
        w.write_all(&[self.mode.tag()])?;
        w.write_all(&self.dist)?;
        Ok(())
    }

    /// Reads and revalidates a table written by [`DistanceTable::write_to`].
    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let mut header = [0u8; HEADER_LEN];
        r.read_exact(&mut header)
            .map_err(|e| Error::Cache(format!("short header: {e}")))?;
        if &header[..4] != MAGIC {
            return Err(Error::Cache("bad magic".into()));
        }
        let version = u16::from_le_bytes([header[4], header[5]]);
        if version != CACHE_VERSION {
            return Err(Error::Cache(format!("unsupported version {version}")));
        }
        let n = u16::from_le_bytes([header[6], header[7]]) as usize;
        if n == 0 || n > MAX_N {
            return Err(Error::Cache(format!("bad circle size {n}")));
        }
        let mode = Mode::from_tag(header[8])
            .ok_or_else(|| Error::Cache(format!("bad mode tag {}", header[8])))?;
        let mut dist = Vec::new();
        r.read_to_end(&mut dist)?;
        Self::from_dist(n, mode, dist)
    }
}

pub fn cache_file_name(n: usize, mode: Mode) -> String {
    format!("csrt-{}-n{n}.bin", mode.name())
}

fn state_rank(a: &Arrangement, mode: Mode, fact: &[u64]) -> u64 {
    let mut buf = [0u8; MAX_N];
    if mode.is_class_mode() {
        let c = a.canonicalize();
        let rest = &c.canon().labels()[1..];
        for (slot, &l) in buf.iter_mut().zip(rest) {
            *slot = (l - 2) as u8;
        }
        rank(&buf[..rest.len()], fact)
    } else {
        for (slot, &l) in buf.iter_mut().zip(a.labels()) {
            *slot = (l - 1) as u8;
        }
        rank(&buf[..a.len()], fact)
    }
}

fn state_unrank(r: u64, n: usize, mode: Mode, fact: &[u64]) -> Arrangement {
    let mut buf = [0u8; MAX_N];
    let labels = if mode.is_class_mode() {
        unrank(r, fact, &mut buf[..n - 1]);
        std::iter::once(1)
            .chain(buf[..n - 1].iter().map(|&x| x as usize + 2))
            .collect()
    } else {
        unrank(r, fact, &mut buf[..n]);
        buf[..n].iter().map(|&x| x as usize + 1).collect()
    };
    Arrangement::from_labels_unchecked(labels)
}

/// Level-synchronous BFS. Frontier expansion runs in parallel; each state is
/// claimed with a compare-and-swap so the final array equals the sequential one.
fn bfs(n: usize, mode: Mode) -> Vec<u8> {
    let count = state_count(n, mode) as usize;
    let fact = factorial_table(n);
    let gens = mode.generators(n);
    let class_mode = mode.is_class_mode();
    let width = if class_mode { n - 1 } else { n };

    let dist: Vec<AtomicU8> = (0..count).map(|_| AtomicU8::new(UNVISITED)).collect();
    dist[0].store(0, Ordering::Relaxed);
    let mut frontier: Vec<u32> = vec![0];
    let mut level: u8 = 0;

    while !frontier.is_empty() {
        assert!(level < UNVISITED - 1, "distance overflows u8 encoding");
        let next_level = level + 1;
        let mut next: Vec<u32> = frontier
            .par_iter()
            .fold(Vec::new, |mut found, &r| {
                let mut code = [0u8; MAX_N];
                unrank(u64::from(r), &fact, &mut code[..width]);
                // Vertex labels, 0-based.
                let mut cur = [0u8; MAX_N];
                if class_mode {
                    cur[0] = 0;
                    for i in 0..width {
                        cur[i + 1] = code[i] + 1;
                    }
                } else {
                    cur[..n].copy_from_slice(&code[..n]);
                }
                let mut work = [0u8; MAX_N];
                let mut packed = [0u8; MAX_N];
                for &(a, b) in &gens {
                    work[..n].copy_from_slice(&cur[..n]);
                    work.swap(a, b);
                    let key = if class_mode {
                        let zero = work[..n]
                            .iter()
                            .position(|&x| x == 0)
                            .expect("label 1 present");
                        for i in 1..n {
                            packed[i - 1] = work[(zero + i) % n] - 1;
                        }
                        rank(&packed[..width], &fact)
                    } else {
                        rank(&work[..n], &fact)
                    };
                    let slot = &dist[key as usize];
                    if slot.load(Ordering::Relaxed) == UNVISITED
                        && slot
                            .compare_exchange(
                                UNVISITED,
                                next_level,
                                Ordering::Relaxed,
                                Ordering::Relaxed,
                            )
                            .is_ok()
                    {
                        found.push(key as u32);
                    }
                }
                found
            })
            .reduce(Vec::new, |mut a, mut b| {
                a.append(&mut b);
                a
            });
        next.sort_unstable();
        frontier = next;
        level = next_level;
    }
    dist.into_iter().map(AtomicU8::into_inner).collect()
}

fn check_budget(n: usize, mode: Mode, cfg: &SearchConfig) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("circle needs at least one vertex".into()));
    }
    let required = state_count(n, mode);
    if n > MAX_N || required > u128::from(cfg.max_states) || required > u128::from(u32::MAX) {
        return Err(Error::Budget {
            required,
            cap: cfg.max_states,
        });
    }
    Ok(())
}

fn load_cached(path: &Path, n: usize, mode: Mode) -> Option<DistanceTable> {
    let file = fs::File::open(path).ok()?;
    let table = DistanceTable::read_from(std::io::BufReader::new(file)).ok()?;
    (table.n == n && table.mode == mode).then_some(table)
}

/// Builds (or loads from the cache directory) the distance table for `(n, mode)`.
///
/// A cached file that fails revalidation is rebuilt and overwritten.
pub fn distance_table(n: usize, mode: Mode, cfg: &SearchConfig) -> Result<DistanceTable> {
    check_budget(n, mode, cfg)?;
    let cache_file = cfg
        .cache_path
        .as_ref()
        .map(|dir| dir.join(cache_file_name(n, mode)));
    if let Some(table) = cache_file.as_deref().and_then(|p| load_cached(p, n, mode)) {
        return Ok(table);
    }
    let table = DistanceTable::from_dist(n, mode, bfs(n, mode))
        .map_err(|e| Error::Internal(format!("fresh table failed validation: {e}")))?;
    if let Some(path) = cache_file {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        let tmp = path.with_extension("tmp");
        let mut w = std::io::BufWriter::new(fs::File::create(&tmp)?);
        table.write_to(&mut w)?;
        w.flush()?;
        drop(w);
        fs::rename(&tmp, &path)?;
    }
    Ok(table)
}

pub fn distance(a: &Arrangement, mode: Mode, cfg: &SearchConfig) -> Result<u32> {
    distance_table(a.len(), mode, cfg)?.distance_of(a)
}

pub fn diameter(n: usize, mode: Mode, cfg: &SearchConfig) -> Result<u32> {
    Ok(distance_table(n, mode, cfg)?.diameter())
}

/// Affine-swap distance from `w_{n,k}` to the identity permutation.
pub fn affine_distance_w(n: usize, k: i64, cfg: &SearchConfig) -> Result<u32> {
    distance(&w_perm(n, k), Mode::Affine, cfg)
}

#[cfg(test)]
mod tests {
    use std::collections::{HashMap, VecDeque};

    use super::*;
    use crate::adjsort::f_formula;
    use crate::arrangement::{AdjSwap, GenSwap};

    fn cfg() -> SearchConfig {
        SearchConfig::default()
    }

    /// Plain BFS over arrangements with a hash map, targeting any rotation
    /// of the trivial arrangement.
    fn naive_class_distances(n: usize, mode: Mode) -> HashMap<Arrangement, u32> {
        let start = Arrangement::trivial(n);
        let mut dist = HashMap::from([(start.canonicalize().into_canon(), 0)]);
        let mut queue = VecDeque::from([start.canonicalize().into_canon()]);
        while let Some(cur) = queue.pop_front() {
            let d = dist[&cur];
            let nexts: Vec<Arrangement> = match mode {
                Mode::Adjacent => (0..n)
                    .map(|p| cur.apply(AdjSwap::new(p)).unwrap())
                    .collect(),
                _ => (0..n)
                    .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                    .map(|(a, b)| cur.apply(GenSwap::new(a, b).unwrap()).unwrap())
                    .collect(),
            };
            for next in nexts {
                let c = next.canonicalize().into_canon();
                if !dist.contains_key(&c) {
                    dist.insert(c.clone(), d + 1);
                    queue.push_back(c);
                }
            }
        }
        dist
    }

    #[test]
    fn matches_naive_search() {
        for n in 1..=7 {
            for mode in [Mode::Adjacent, Mode::AllSwap] {
                let table = distance_table(n, mode, &cfg()).unwrap();
                let naive = naive_class_distances(n, mode);
                assert_eq!(table.len(), naive.len());
                for (a, d) in table.entries() {
                    assert_eq!(naive[&a], d, "n={n} {mode:?} {a}");
                }
            }
        }
    }

    #[test]
    fn table_examples() {
        let t3 = distance_table(3, Mode::Adjacent, &cfg()).unwrap();
        assert_eq!(t3.histogram(), &[1, 1]);
        assert_eq!(diameter(6, Mode::Adjacent, &cfg()).unwrap(), 6);
        assert_eq!(diameter(4, Mode::AllSwap, &cfg()).unwrap(), 1);
        assert_eq!(diameter(1, Mode::Adjacent, &cfg()).unwrap(), 0);
        assert_eq!(diameter(8, Mode::Adjacent, &cfg()).unwrap(), 12);
        assert_eq!(diameter(5, Mode::AllSwap, &cfg()).unwrap(), 3);
    }

    #[test]
    fn distance_examples() {
        let c = cfg();
        assert_eq!(
            distance(&Arrangement::trivial(5), Mode::Adjacent, &c).unwrap(),
            0
        );
        assert_eq!(
            distance(&"2 1 3 4 5".parse().unwrap(), Mode::Adjacent, &c).unwrap(),
            1
        );
        assert_eq!(
            distance(&Arrangement::reversal(7), Mode::Adjacent, &c).unwrap(),
            9
        );
        assert_eq!(
            distance(&"3 4 5 1 2".parse().unwrap(), Mode::Adjacent, &c).unwrap(),
            0
        );
    }

    #[test]
    fn affine_examples() {
        let c = cfg();
        assert_eq!(affine_distance_w(4, 1, &c).unwrap(), 2);
        assert_eq!(affine_distance_w(4, 0, &c).unwrap(), 3);
        // w_{2,0} and w_{1,k} are identities.
        assert_eq!(affine_distance_w(2, 0, &c).unwrap(), 0);
        assert_eq!(affine_distance_w(1, 0, &c).unwrap(), 0);
        let affine = distance_table(4, Mode::Affine, &c).unwrap();
        assert_eq!(affine.len(), 24);
        assert_eq!(affine.histogram()[0], 1);
    }

    #[test]
    fn histogram_totals() {
        for n in 1..=8 {
            for mode in [Mode::Adjacent, Mode::AllSwap, Mode::Affine] {
                let t = distance_table(n, mode, &cfg()).unwrap();
                assert_eq!(t.histogram()[0], 1);
                assert_eq!(
                    t.histogram().iter().sum::<u64>() as u128,
                    state_count(n, mode)
                );
            }
            assert_eq!(
                diameter(n, Mode::Adjacent, &cfg()).unwrap() as u64,
                f_formula(n as u64)
            );
        }
    }

    #[test]
    fn budget_refusal() {
        let err =
            distance_table(9, Mode::Adjacent, &SearchConfig::with_max_states(1000)).unwrap_err();
        assert!(matches!(
            err,
            Error::Budget {
                required: 40320,
                cap: 1000
            }
        ));
        assert!(distance_table(0, Mode::Adjacent, &cfg()).is_err());
    }

    #[test]
    fn cache_roundtrip_and_revalidation() {
        let dir = tempfile::tempdir().unwrap();
        let c = SearchConfig {
            cache_path: Some(dir.path().to_path_buf()),
            ..cfg()
        };
        let fresh = distance_table(6, Mode::Adjacent, &c).unwrap();
        let path = dir.path().join(cache_file_name(6, Mode::Adjacent));
        let bytes = fs::read(&path).unwrap();
        assert_eq!(&bytes[..4], b"CSRT");
        assert_eq!(u16::from_le_bytes([bytes[4], bytes[5]]), 1);
        assert_eq!(u16::from_le_bytes([bytes[6], bytes[7]]), 6);
        assert_eq!(bytes[8], 0);
        assert_eq!(bytes.len(), 9 + 120);
        assert_eq!(distance_table(6, Mode::Adjacent, &c).unwrap(), fresh);

        // Corrupt the trivial entry; the loader must reject and rebuild.
        let mut bad = bytes.clone();
        bad[9] = 3;
        assert!(DistanceTable::read_from(&bad[..]).is_err());
        fs::write(&path, &bad).unwrap();
        assert_eq!(distance_table(6, Mode::Adjacent, &c).unwrap(), fresh);
        assert_eq!(fs::read(&path).unwrap(), bytes);

        assert!(DistanceTable::read_from(&bytes[..5]).is_err());
        assert!(DistanceTable::read_from(&bytes[..100]).is_err());
    }
}
