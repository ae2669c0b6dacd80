//! Exhaustive radius-1 coverage of Q_n over a dense bitmap, plus
//! k-separation checks.
//!
//! A word maps to the integer whose most significant bit is position 1; the
//! bitmap holds one bit per vertex in that order.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, AtomicU8, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;
use crate::word::Word;

pub const DEFAULT_MAX_DIM: usize = 28;
/// Ceiling for the configurable dimension cap.
pub const HARD_MAX_DIM: usize = 31;
pub const DEFAULT_MAX_UNDOMINATED: usize = 64;

/// Below this many members the marking runs on the calling thread.
const PARALLEL_THRESHOLD: usize = 4096;

#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub max_dim: usize,
    pub histogram: bool,
    pub max_undominated: usize,
    /// Worker count; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            max_dim: DEFAULT_MAX_DIM,
            histogram: false,
            max_undominated: DEFAULT_MAX_UNDOMINATED,
            threads: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageReport {
    pub dim: usize,
    pub covered_count: u64,
    /// Undominated vertices in index order, truncated to the requested limit.
    pub undominated: Vec<Word>,
    pub undominated_total: u64,
    /// Cover multiplicity → number of vertices with that multiplicity.
    pub multiplicity_histogram: Option<BTreeMap<usize, u64>>,
}

impl CoverageReport {
    pub fn is_dominated(&self) -> bool {
        self.undominated_total == 0
    }

    pub fn vertex_count(&self) -> u64 {
        1u64 << self.dim
    }
}

/// Bytes needed to check Q_dim: the bitmap, plus one counter per vertex with a
/// histogram.
pub fn required_bytes(dim: usize, histogram: bool) -> u64 {
    let bitmap = (1u64 << dim).div_ceil(64) * 8;
    if histogram {
        bitmap + (1u64 << dim)
    } else {
        bitmap
    }
}

/// The closed radius-1 ball: `w` and its single-letter flips.
pub fn ball1(w: &Word) -> VertexSet {
    VertexSet::new(w.len(), std::iter::once(w.clone()).chain(w.neighbours()))
        .expect("flips of a word are distinct")
}

pub fn check_domination(dim: usize, set: &VertexSet) -> Result<CoverageReport> {
    check_domination_with(dim, set, &CheckOptions::default())
}

pub fn check_domination_with(
    dim: usize,
    set: &VertexSet,
    opts: &CheckOptions,
) -> Result<CoverageReport> {
    if set.dim() != dim {
        return Err(Error::DimensionMismatch { set: set.dim(), requested: dim });
    }
    let limit = opts.max_dim.min(HARD_MAX_DIM);
    if dim > limit {
        return Err(Error::DimensionOverLimit {
            dim,
            limit,
            bytes: required_bytes(dim, opts.histogram),
        });
    }
    let indices: Vec<u64> = set.iter().map(|w| w.to_index().expect("dim <= 31")).collect();
    let run = || mark(dim, &indices, opts);
    match opts.threads {
        Some(t) if t > 0 => Ok(rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Invariant(format!("thread pool: {e}")))?
            .install(run)),
        _ => Ok(run()),
    }
}

fn mark(dim: usize, indices: &[u64], opts: &CheckOptions) -> CoverageReport {
    let vertices = 1u64 << dim;
    let words = vertices.div_ceil(64) as usize;
    let bitmap: Vec<AtomicU64> = (0..words).map(|_| AtomicU64::new(0)).collect();
    let counts: Option<Vec<AtomicU8>> =
        opts.histogram.then(|| (0..vertices).map(|_| AtomicU8::new(0)).collect());

    let mark_one = |v: u64| {
        bitmap[(v >> 6) as usize].fetch_or(1u64 << (v & 63), Ordering::Relaxed);
        if let Some(c) = &counts {
            c[v as usize].fetch_add(1, Ordering::Relaxed);
        }
    };
    let mark_ball = |center: u64| {
        mark_one(center);
        for j in 0..dim {
            mark_one(center ^ (1u64 << j));
        }
    };
    if indices.len() < PARALLEL_THRESHOLD {
        indices.iter().for_each(|&c| mark_ball(c));
    } else {
        indices.par_iter().for_each(|&c| mark_ball(c));
    }

    let bitmap: Vec<u64> = bitmap.into_iter().map(AtomicU64::into_inner).collect();
    let tail_mask = if vertices.is_multiple_of(64) { u64::MAX } else { (1u64 << (vertices % 64)) - 1 };
    let covered_count: u64 = bitmap
        .iter()
        .enumerate()
        .map(|(i, &b)| {
            let b = if i + 1 == words { b & tail_mask } else { b };
            b.count_ones() as u64
        })
        .sum();
    let undominated_total = vertices - covered_count;

    let mut undominated = Vec::new();
    if undominated_total > 0 {
        'scan: for (i, &b) in bitmap.iter().enumerate() {
            let mut missing = !b & if i + 1 == words { tail_mask } else { u64::MAX };
            while missing != 0 {
                if undominated.len() >= opts.max_undominated {
                    break 'scan;
                }
                let bit = missing.trailing_zeros() as u64;
                undominated.push(Word::from_index(dim, ((i as u64) << 6) | bit));
                missing &= missing - 1;
            }
        }
    }

    let multiplicity_histogram = counts.map(|c| {
        let mut hist = BTreeMap::new();
        for v in c {
            *hist.entry(v.into_inner() as usize).or_insert(0u64) += 1;
        }
        hist
    });

    CoverageReport { dim, covered_count, undominated, undominated_total, multiplicity_histogram }
}

/// Outcome of a pairwise distance check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    pub separated: bool,
    /// On failure: `(earlier, later)` where `later` is the first member (in
    /// set order) within distance `k − 1` of an earlier member, and `earlier`
    /// the first such member.
    pub witness: Option<(Word, Word)>,
}

impl Separation {
    fn ok() -> Self {
        Self { separated: true, witness: None }
    }
}

/// Whether all pairs of distinct members are at distance ≥ `k`.
pub fn is_k_separated(set: &VertexSet, k: usize) -> Separation {
    if k <= 1 || set.len() < 2 {
        return Separation::ok();
    }
    let dim = set.dim();
    let radius = k - 1;
    let ball = ball_volume(dim, radius);
    let pairwise_cost = (set.len() as u128).pow(2) / 2;
    if dim <= 64 && ball.saturating_mul(set.len() as u128) < pairwise_cost {
        separated_by_balls(set, radius)
    } else {
        separated_pairwise(set, k)
    }
}

fn ball_volume(dim: usize, radius: usize) -> u128 {
    let mut total = 0u128;
    let mut c = 1u128;
    for i in 0..=radius.min(dim) {
        total += c;
        c = c * (dim - i) as u128 / (i + 1) as u128;
    }
    total
}

pub(crate) fn separated_pairwise(set: &VertexSet, k: usize) -> Separation {
    let m = set.members();
    for j in 1..m.len() {
        for i in 0..j {
            if m[i].distance(&m[j]) < k {
                return Separation { separated: false, witness: Some((m[i].clone(), m[j].clone())) };
            }
        }
    }
    Separation::ok()
}

/// Nonzero masks of weight ≤ `radius` on `dim` bits.
fn ball_masks(dim: usize, radius: usize) -> Vec<u64> {
    let mut out = Vec::new();
    fn rec(dim: usize, start: usize, left: usize, acc: u64, out: &mut Vec<u64>) {
        if acc != 0 {
            out.push(acc);
        }
        if left == 0 {
            return;
        }
        for j in start..dim {
            rec(dim, j + 1, left - 1, acc | (1u64 << j), out);
        }
    }
    rec(dim, 0, radius, 0, &mut out);
    out
}

fn separated_by_balls(set: &VertexSet, radius: usize) -> Separation {
    let dim = set.dim();
    let masks = ball_masks(dim, radius);
    let m = set.members();
    let mut seen: HashMap<u64, usize> = HashMap::with_capacity(m.len());
    for (j, w) in m.iter().enumerate() {
        let v = w.to_index().expect("dim <= 64");
        let hit = masks.iter().filter_map(|mask| seen.get(&(v ^ mask)).copied()).min();
        if let Some(i) = hit {
            return Separation { separated: false, witness: Some((m[i].clone(), w.clone())) };
        }
        seen.insert(v, j);
    }
    Separation::ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn set(dim: usize, words: &[&str]) -> VertexSet {
        VertexSet::new(dim, words.iter().map(|s| w(s))).unwrap()
    }

    /// Independent check: every vertex against every member.
    fn naive_undominated(dim: usize, s: &VertexSet) -> Vec<Word> {
        (0..1u64 << dim)
            .map(|i| Word::from_index(dim, i))
            .filter(|v| s.iter().all(|c| c.distance(v) > 1))
            .collect()
    }

    #[test]
    fn ball_examples() {
        assert_eq!(ball1(&w("00")), set(2, &["00", "10", "01"]));
        assert_eq!(ball1(&w("000")), set(3, &["000", "100", "010", "001"]));
        assert_eq!(ball1(&w("10110")).len(), 6);
    }

    #[test]
    fn small_domination_examples() {
        assert!(check_domination(1, &set(1, &["0"])).unwrap().is_dominated());

        let r = check_domination(3, &set(3, &["000"])).unwrap();
        assert_eq!(r.undominated_total, 4);
        assert_eq!(r.covered_count, 4);
        assert_eq!(r.undominated, vec![w("011"), w("101"), w("110"), w("111")]);

        // {000, 110} misses 011 and 101.
        let r = check_domination(3, &set(3, &["000", "110"])).unwrap();
        assert!(!r.is_dominated());
        assert_eq!(r.undominated, naive_undominated(3, &set(3, &["000", "110"])));
        assert_eq!(r.undominated, vec![w("011"), w("101")]);

        assert!(check_domination(3, &set(3, &["000", "111"])).unwrap().is_dominated());
    }

    #[test]
    fn refuses_over_limit_with_estimate() {
        let opts = CheckOptions { max_dim: 10, ..Default::default() };
        let err = check_domination_with(12, &VertexSet::empty(12), &opts).unwrap_err();
        assert_eq!(err, Error::DimensionOverLimit { dim: 12, limit: 10, bytes: 512 });
        let opts = CheckOptions { max_dim: 40, ..Default::default() };
        assert!(matches!(
            check_domination_with(32, &VertexSet::empty(32), &opts),
            Err(Error::DimensionOverLimit { limit: 31, .. })
        ));
        assert!(matches!(
            check_domination(4, &set(3, &["000"])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn bitmap_matches_naive_on_random_sets() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..60 {
            let dim = rng.gen_range(1..=10);
            let size = rng.gen_range(1..=(1usize << dim).min(200));
            let s = VertexSet::collect_dedup(
                dim,
                (0..size).map(|_| Word::from_index(dim, rng.gen_range(0..1u64 << dim))),
            )
            .unwrap();
            let opts = CheckOptions { max_undominated: usize::MAX, histogram: true, ..Default::default() };
            let r = check_domination_with(dim, &s, &opts).unwrap();
            let naive = naive_undominated(dim, &s);
            assert_eq!(r.undominated, naive);
            assert_eq!(r.undominated_total as usize, naive.len());
            assert_eq!(r.covered_count + r.undominated_total, 1 << dim);
            let hist = r.multiplicity_histogram.unwrap();
            assert_eq!(hist.values().sum::<u64>(), 1 << dim);
            assert_eq!(hist.get(&0).copied().unwrap_or(0), r.undominated_total);
        }
    }

    #[test]
    fn truncation_keeps_true_total() {
        let opts = CheckOptions { max_undominated: 3, ..Default::default() };
        let r = check_domination_with(6, &set(6, &["000000"]), &opts).unwrap();
        assert_eq!(r.undominated.len(), 3);
        assert_eq!(r.undominated_total, 64 - 7);
    }

    #[test]
    fn report_independent_of_thread_count() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        let dim = 16;
        let s = VertexSet::collect_dedup(
            dim,
            (0..9000).map(|_| Word::from_index(dim, rng.gen_range(0..1u64 << dim))),
        )
        .unwrap();
        let base = CheckOptions { histogram: true, ..Default::default() };
        let one = check_domination_with(dim, &s, &CheckOptions { threads: Some(1), ..base.clone() });
        let four = check_domination_with(dim, &s, &CheckOptions { threads: Some(4), ..base });
        assert_eq!(one.unwrap(), four.unwrap());
    }

    #[test]
    fn separation_examples() {
        assert!(is_k_separated(&set(3, &["000", "111"]), 3).separated);
        let r = is_k_separated(&set(3, &["000", "110"]), 3);
        assert!(!r.separated);
        assert_eq!(r.witness, Some((w("000"), w("110"))));
        assert!(is_k_separated(&set(3, &["101"]), 3).separated);
        assert!(is_k_separated(&VertexSet::empty(3), 7).separated);
    }

    #[test]
    fn ball_and_pairwise_strategies_agree() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for _ in 0..200 {
            let dim = rng.gen_range(3..=12);
            let size = rng.gen_range(2..=40);
            let s = VertexSet::collect_dedup(
                dim,
                (0..size).map(|_| Word::from_index(dim, rng.gen_range(0..1u64 << dim))),
            )
            .unwrap();
            for k in 2..=4 {
                assert_eq!(separated_by_balls(&s, k - 1), separated_pairwise(&s, k));
            }
        }
    }
}
