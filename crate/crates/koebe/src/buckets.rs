//! Radius buckets and the accessibility diagnostics built on them.
//!
//! After normalizing a coin model at a root vertex, every vertex falls into
//! the bucket `i` with `d^{3i} <= r < d^{3i+3}`. Weak reachability from the
//! root interacts with this partition through an accessibility relation
//! whose greedy traces obey small exact bounds; this module computes the
//! partition, per-bucket reachability histograms, the accessibility
//! relation with witnesses, both greedy index traces, and the gap check for
//! doubly-accessible indices.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::geometry::CoinModel;
use crate::graph::{PlanarGraph, VertexOrdering};
use crate::math;
use crate::reach::wreach_all;

const BOUNDARY_SNAP: f64 = 1e-9;
const NORMALIZATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum BucketError {
    /// Root disc must be the unit disc at the origin.
    NotNormalized { radius: f64, center_norm: f64 },
    RadixTooSmall { d: usize },
}

impl fmt::Display for BucketError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BucketError::NotNormalized {
                radius,
                center_norm,
            } => write!(
                f,
                "root disc not normalized (radius {radius}, center at {center_norm})"
            ),
            BucketError::RadixTooSmall { d } => write!(f, "bucket radix d={d} must be >= 2"),
        }
    }
}

impl core::error::Error for BucketError {}

/// The unique integer `i` with `d^{3i} <= r < d^{3i+3}`.
///
/// Radii within relative `1e-9` of a boundary `d^{3i}` snap onto it and are
/// assigned bucket `i`, keeping the half-open convention stable under
/// floating-point drift near exact powers.
pub fn bucket_index(r: f64, d: usize) -> i64 {
    debug_assert!(r > 0.0 && d >= 2);
    let log_base = 3.0 * math::ln(d as f64);
    let t = math::ln(r) / log_base;
    let mut i = math::floor(t) as i64;
    for candidate in [i, i + 1] {
        let boundary = math::powf(d as f64, (3 * candidate) as f64);
        if math::abs(r - boundary) <= BOUNDARY_SNAP * boundary {
            return candidate;
        }
    }
    // Float log can misplace values close to (but not snapped onto) a
    // boundary; settle by direct comparison.
    while r < math::powf(d as f64, (3 * i) as f64) {
        i -= 1;
    }
    while r >= math::powf(d as f64, (3 * (i + 1)) as f64) {
        i += 1;
    }
    i
}

/// Total assignment of vertices to radius buckets, rooted at a vertex in
/// bucket zero.
#[derive(Debug, Clone)]
pub struct BucketPartition {
    pub d: usize,
    pub root: usize,
    pub index: Vec<i64>,
    /// Whether the regime the diagnostics assume (`d > 12`) holds.
    pub radix_in_paper_regime: bool,
}

impl BucketPartition {
    pub fn bucket_of(&self, v: usize) -> i64 {
        self.index[v]
    }

    /// Nonempty bucket indices, ascending.
    pub fn nonempty(&self) -> Vec<i64> {
        let set: BTreeSet<i64> = self.index.iter().copied().collect();
        set.into_iter().collect()
    }
}

/// Buckets of a model normalized at `root` (so the root lands in bucket 0).
pub fn bucket_partition(
    model: &CoinModel,
    d: usize,
    root: usize,
) -> Result<BucketPartition, BucketError> {
    if d < 2 {
        return Err(BucketError::RadixTooSmall { d });
    }
    let base = model.disc(root);
    if math::abs(base.radius - 1.0) > NORMALIZATION_TOL
        || base.center.norm() > NORMALIZATION_TOL
    {
        return Err(BucketError::NotNormalized {
            radius: base.radius,
            center_norm: base.center.norm(),
        });
    }
    let index: Vec<i64> = model
        .discs()
        .iter()
        .map(|disc| bucket_index(disc.radius, d))
        .collect();
    debug_assert_eq!(index[root], 0);
    Ok(BucketPartition {
        d,
        root,
        index,
        radix_in_paper_regime: d > 12,
    })
}

/// Geometric witness data for one weakly reachable vertex: its radius and
/// center distance must satisfy `1 + r <= a <= 2 d r`.
#[derive(Debug, Clone, Copy)]
pub struct EnvelopeWitness {
    pub vertex: usize,
    pub radius: f64,
    pub center_distance: f64,
}

impl EnvelopeWitness {
    pub fn satisfies_envelope(&self, d: usize) -> bool {
        let slack = 1e-9 * self.center_distance.max(1.0);
        self.center_distance + slack >= 1.0 + self.radius
            && self.center_distance <= 2.0 * d as f64 * self.radius + slack
    }
}

/// Bucket histogram of the root's weak reachability set.
#[derive(Debug, Clone)]
pub struct WReachBucketHistogram {
    pub root: usize,
    pub counts: BTreeMap<i64, usize>,
    pub total: usize,
    pub witnesses: Vec<EnvelopeWitness>,
}

/// Counts `WReach_d[root]` per bucket and reports the geometric envelope
/// witnesses for every reached vertex other than the root.
pub fn wreach_bucket_histogram(
    graph: &PlanarGraph,
    model: &CoinModel,
    ord: &VertexOrdering,
    d: usize,
    root: usize,
) -> Result<WReachBucketHistogram, BucketError> {
    let partition = bucket_partition(model, d, root)?;
    let sets = wreach_all(graph, ord, d);
    let reach = &sets.sets[root];
    let mut counts = BTreeMap::new();
    let mut witnesses = Vec::new();
    for &w in reach {
        *counts.entry(partition.bucket_of(w)).or_insert(0) += 1;
        if w != root {
            let disc = model.disc(w);
            witnesses.push(EnvelopeWitness {
                vertex: w,
                radius: disc.radius,
                center_distance: disc.center.norm(),
            });
        }
    }
    Ok(WReachBucketHistogram {
        root,
        counts,
        total: reach.len(),
        witnesses,
    })
}

/// Tests whether bucket `j` is accessible from level `i`: some weak
/// reachability path from the root of length at most `d` ends in `B_j` while
/// staying inside `B_j ∪ ⋃_{k<=i} B_k`.
///
/// The weak-reachability rank condition is enforced per candidate endpoint
/// `w`: the restricted search only visits vertices ranked at or above `w`.
pub fn accessible(
    graph: &PlanarGraph,
    partition: &BucketPartition,
    ord: &VertexOrdering,
    d: usize,
    root: usize,
    i: i64,
    j: i64,
) -> Option<Vec<usize>> {
    assert!(j > i && i >= 0, "need j > i >= 0");
    let n = graph.vertex_count();
    let mut candidates: Vec<usize> = (0..n)
        .filter(|&w| partition.bucket_of(w) == j && ord.rank(w) <= ord.rank(root))
        .collect();
    candidates.sort_by_key(|&w| ord.rank(w));
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    for w in candidates {
        let min_rank = ord.rank(w);
        let allowed = |v: usize| -> bool {
            if ord.rank(v) < min_rank {
                return false;
            }
            let b = partition.bucket_of(v);
            b == j || b <= i
        };
        if !allowed(root) {
            continue;
        }
        dist.iter_mut().for_each(|x| *x = usize::MAX);
        let mut queue = alloc::collections::VecDeque::new();
        dist[root] = 0;
        queue.push_back(root);
        while let Some(x) = queue.pop_front() {
            if x == w {
                break;
            }
            if dist[x] == d {
                continue;
            }
            for &y in graph.neighbors(x) {
                if dist[y] == usize::MAX && allowed(y) {
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if dist[w] <= d {
            let mut path = vec![w];
            let mut cur = w;
            while cur != root {
                cur = parent[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
    }
    None
}

/// The two greedy index sequences over accessible buckets.
#[derive(Debug, Clone)]
pub struct GreedyIndexTrace {
    /// `i_0 = 0 < i_1 < …`, each the maximum index accessible from its
    /// predecessor.
    pub major: Vec<i64>,
    /// `minors[t]` starts at `major[t]` and greedily takes the maximum
    /// accessible index below `major[t+1]`.
    pub minors: Vec<Vec<i64>>,
    /// Bucket indices that intersect `WReach_d[root]`.
    pub reached_buckets: Vec<i64>,
}

/// Runs both greedy constructions and asserts their exact step bounds
/// (`p <= d`, `p_t <= d - t`, reached buckets `<= (d+1)²`).
pub fn greedy_traces(
    graph: &PlanarGraph,
    model: &CoinModel,
    ord: &VertexOrdering,
    d: usize,
    root: usize,
) -> Result<GreedyIndexTrace, BucketError> {
    let partition = bucket_partition(model, d, root)?;
    let buckets = partition.nonempty();
    let mut cache: BTreeMap<(i64, i64), bool> = BTreeMap::new();
    let mut is_accessible = |i: i64, j: i64| -> bool {
        if j <= i {
            return false;
        }
        *cache
            .entry((i, j))
            .or_insert_with(|| accessible(graph, &partition, ord, d, root, i, j).is_some())
    };

    let mut major = vec![0i64];
    loop {
        let from = *major.last().unwrap();
        let next = buckets
            .iter()
            .rev()
            .copied()
            .find(|&j| j > from && is_accessible(from, j));
        match next {
            Some(j) => major.push(j),
            None => break,
        }
    }
    let p = major.len() - 1;
    assert!(p <= d, "major greedy took {p} steps > d={d}");

    let mut minors = Vec::new();
    for t in 0..p {
        let ceiling = major[t + 1];
        let mut minor = vec![major[t]];
        loop {
            let from = *minor.last().unwrap();
            let next = buckets
                .iter()
                .rev()
                .copied()
                .find(|&j| j > from && j < ceiling && is_accessible(from, j));
            match next {
                Some(j) => minor.push(j),
                None => break,
            }
        }
        let p_t = minor.len() - 1;
        assert!(p_t <= d - t, "minor greedy {t} took {p_t} steps > d-t");
        minors.push(minor);
    }

    let sets = wreach_all(graph, ord, d);
    let reached: BTreeSet<i64> = sets.sets[root]
        .iter()
        .map(|&w| partition.bucket_of(w))
        .collect();
    let reached_buckets: Vec<i64> = reached.into_iter().collect();
    assert!(
        reached_buckets.len() <= (d + 1) * (d + 1),
        "{} reached buckets exceed (d+1)^2",
        reached_buckets.len()
    );

    Ok(GreedyIndexTrace {
        major,
        minors,
        reached_buckets,
    })
}

/// One checked triple: `j < j'` both accessible from `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JumpTriple {
    pub i: i64,
    pub j: i64,
    pub j_prime: i64,
}

/// Result of the double-accessibility gap check.
#[derive(Debug, Clone)]
pub struct JumpReport {
    pub triples: Vec<JumpTriple>,
    /// `(i, j, j', t)` with a nonempty reached bucket `t ∈ {i+2, …, j-1}`.
    pub violations: Vec<(i64, i64, i64, i64)>,
}

impl JumpReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For every pair of indices accessible from a common level, the buckets
/// strictly between the level (offset two) and the smaller index must avoid
/// the root's weak reachability set; violations would falsify the
/// implementation, not the theory.
pub fn verify_jump_gaps(
    graph: &PlanarGraph,
    model: &CoinModel,
    ord: &VertexOrdering,
    d: usize,
    root: usize,
) -> Result<JumpReport, BucketError> {
    let partition = bucket_partition(model, d, root)?;
    let buckets = partition.nonempty();
    let max_bucket = buckets.last().copied().unwrap_or(0);
    let sets = wreach_all(graph, ord, d);
    let reached: BTreeSet<i64> = sets.sets[root]
        .iter()
        .map(|&w| partition.bucket_of(w))
        .collect();

    let mut accessible_from: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
    for i in 0..=max_bucket {
        let reachable: Vec<i64> = buckets
            .iter()
            .copied()
            .filter(|&j| j > i && accessible(graph, &partition, ord, d, root, i, j).is_some())
            .collect();
        if !reachable.is_empty() {
            accessible_from.insert(i, reachable);
        }
    }

    let mut triples = Vec::new();
    let mut violations = Vec::new();
    for (&i, js) in &accessible_from {
        for (a, &j) in js.iter().enumerate() {
            for &j_prime in &js[a + 1..] {
                triples.push(JumpTriple { i, j, j_prime });
                for t in (i + 2)..j {
                    if reached.contains(&t) {
                        violations.push((i, j, j_prime, t));
                    }
                }
            }
        }
    }
    Ok(JumpReport {
        triples,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{CoinModel, Disc, Point};

    #[test]
    fn bucket_index_examples() {
        assert_eq!(bucket_index(1.0, 10), 0);
        assert_eq!(bucket_index(1000.0, 10), 1);
        assert_eq!(bucket_index(0.5, 10), -1);
        assert_eq!(bucket_index(999.999, 10), 0);
        assert_eq!(bucket_index(1e6, 10), 2);
    }

    #[test]
    fn bucket_boundaries_snap() {
        // A hair below the boundary still lands in the upper bucket.
        let boundary = 1000.0;
        assert_eq!(bucket_index(boundary * (1.0 - 1e-12), 10), 1);
        assert_eq!(bucket_index(boundary * (1.0 + 1e-12), 10), 1);
        // Outside the snap window the half-open convention applies.
        assert_eq!(bucket_index(boundary * (1.0 - 1e-6), 10), 0);
    }

    #[test]
    fn bucket_index_shifts_by_one_per_radix_cube() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let r = rng.gen_range(1e-6..1e6);
            for d in [2usize, 3, 10, 28] {
                let cube = (d * d * d) as f64;
                assert_eq!(
                    bucket_index(r * cube, d),
                    bucket_index(r, d) + 1,
                    "r={r} d={d}"
                );
            }
        }
    }

    fn unit_model(n: usize) -> CoinModel {
        CoinModel::new(
            (0..n)
                .map(|i| Disc::new(Point::new(2.0 * i as f64, 0.0), 1.0).unwrap())
                .collect(),
        )
    }

    #[test]
    fn all_unit_radii_fall_in_bucket_zero() {
        let model = unit_model(5);
        let partition = bucket_partition(&model, 7, 0).unwrap();
        assert!(partition.index.iter().all(|&b| b == 0));
        assert!(!partition.radix_in_paper_regime);
    }

    #[test]
    fn normalization_is_required() {
        let model = CoinModel::new(vec![
            Disc::new(Point::new(0.0, 0.0), 2.0).unwrap(),
            Disc::new(Point::new(5.0, 0.0), 1.0).unwrap(),
        ]);
        assert!(matches!(
            bucket_partition(&model, 4, 0),
            Err(BucketError::NotNormalized { .. })
        ));
    }

    #[test]
    fn histogram_of_isolated_root_is_trivial() {
        let g = PlanarGraph::new(3, alloc::vec![]).unwrap();
        let model = unit_model(3);
        let ord = VertexOrdering::identity(3);
        let hist = wreach_bucket_histogram(&g, &model, &ord, 3, 0).unwrap();
        assert_eq!(hist.total, 1);
        assert_eq!(hist.counts.get(&0), Some(&1));
        assert!(hist.witnesses.is_empty());
    }

    #[test]
    fn single_bucket_chain_has_trivial_trace() {
        // Path of tangent unit discs: everything in bucket 0.
        let g = PlanarGraph::new(4, alloc::vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        let model = unit_model(4);
        let ord = VertexOrdering::identity(4);
        let trace = greedy_traces(&g, &model, &ord, 3, 0).unwrap();
        assert_eq!(trace.major, alloc::vec![0]);
        assert!(trace.minors.is_empty());
        assert_eq!(trace.reached_buckets, alloc::vec![0]);
        let report = verify_jump_gaps(&g, &model, &ord, 3, 0).unwrap();
        assert!(report.passed());
        assert!(report.triples.is_empty());
    }

    #[test]
    fn histogram_counts_sum_to_reach_size() {
        let g = PlanarGraph::new(4, alloc::vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        let model = unit_model(4);
        let ord = VertexOrdering::from_ids(alloc::vec![3, 2, 1, 0]).unwrap();
        for d in 1..4 {
            let hist = wreach_bucket_histogram(&g, &model, &ord, d, 0).unwrap();
            let sum: usize = hist.counts.values().sum();
            assert_eq!(sum, hist.total);
        }
    }
}
