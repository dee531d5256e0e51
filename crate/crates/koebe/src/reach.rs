//! Weak and strong reachability sets, coloring-number metrics for a fixed
//! ordering, and ordering-space minimization at desk scale.
//!
//! For an ordering `⪯`, a vertex `u ⪯ v` is *weakly d-reachable* from `v` if
//! some path of at most `d` edges from `v` to `u` stays at vertices `⪰ u`;
//! it is *strongly d-reachable* if such a path has all internal vertices
//! `≻ v`. Reachability sets are reflexive: `v` always reaches itself.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::adm::{self, AdmConfig, AdmError};
use crate::graph::{PlanarGraph, VertexOrdering};

/// Which reachability statistic a report carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    Wcol,
    Scol,
    Adm,
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricKind::Wcol => write!(f, "wcol"),
            MetricKind::Scol => write!(f, "scol"),
            MetricKind::Adm => write!(f, "adm"),
        }
    }
}

/// Per-vertex weak or strong reachability sets at a fixed radius.
#[derive(Debug, Clone)]
pub struct ReachSets {
    pub d: usize,
    /// `sets[v]` lists the reachable vertices of `v`, ascending by rank of
    /// the reached vertex for weak sets, ascending by id for strong sets.
    pub sets: Vec<Vec<usize>>,
}

impl ReachSets {
    pub fn size_of(&self, v: usize) -> usize {
        self.sets[v].len()
    }

    pub fn contains(&self, v: usize, u: usize) -> bool {
        self.sets[v].iter().any(|&w| w == u)
    }

    pub fn max_size(&self) -> usize {
        self.sets.iter().map(|s| s.len()).max().unwrap_or(0)
    }
}

/// All weak reachability sets, in `O(n (n + m))`.
///
/// For each `u` in ascending rank order, a breadth-first search from `u` to
/// depth `d` inside the subgraph induced by `{w : rank(w) >= rank(u)}` adds
/// `u` to the weak set of every visited vertex.
pub fn wreach_all(graph: &PlanarGraph, ord: &VertexOrdering, d: usize) -> ReachSets {
    let n = graph.vertex_count();
    let mut sets = vec![Vec::new(); n];
    let mut dist = vec![usize::MAX; n];
    let mut touched = Vec::new();
    let mut queue = VecDeque::new();
    for p in 0..n {
        let u = ord.vertex_at(p);
        dist[u] = 0;
        touched.push(u);
        queue.push_back(u);
        while let Some(x) = queue.pop_front() {
            sets[x].push(u);
            if dist[x] == d {
                continue;
            }
            for &y in graph.neighbors(x) {
                if dist[y] == usize::MAX && ord.rank(y) >= p {
                    dist[y] = dist[x] + 1;
                    touched.push(y);
                    queue.push_back(y);
                }
            }
        }
        for &x in &touched {
            dist[x] = usize::MAX;
        }
        touched.clear();
    }
    ReachSets { d, sets }
}

/// Strong reachability set of a single vertex, ascending by id.
pub fn sreach_vertex(
    graph: &PlanarGraph,
    ord: &VertexOrdering,
    d: usize,
    v: usize,
) -> Vec<usize> {
    let mut result = vec![v];
    if d == 0 {
        return result;
    }
    let n = graph.vertex_count();
    let rv = ord.rank(v);
    // Depth-(d-1) search from v through vertices ranked above v; any smaller
    // vertex adjacent to the explored region is strongly d-reachable.
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    dist[v] = 0;
    queue.push_back(v);
    let mut reached = vec![false; n];
    while let Some(x) = queue.pop_front() {
        for &y in graph.neighbors(x) {
            let ry = ord.rank(y);
            if ry < rv {
                reached[y] = true;
            } else if ry > rv && dist[y] == usize::MAX && dist[x] + 1 <= d - 1 {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    for (u, &hit) in reached.iter().enumerate() {
        if hit {
            result.push(u);
        }
    }
    result.sort_unstable();
    result
}

/// All strong reachability sets.
pub fn sreach_all(graph: &PlanarGraph, ord: &VertexOrdering, d: usize) -> ReachSets {
    let n = graph.vertex_count();
    let sets = (0..n).map(|v| sreach_vertex(graph, ord, d, v)).collect();
    ReachSets { d, sets }
}

/// Per-vertex metric values with their maximum.
#[derive(Debug, Clone)]
pub struct MetricReport {
    pub kind: MetricKind,
    pub d: usize,
    pub values: Vec<usize>,
    pub max: usize,
    pub argmax: Option<usize>,
}

impl MetricReport {
    fn from_values(kind: MetricKind, d: usize, values: Vec<usize>) -> Self {
        let mut max = 0;
        let mut argmax = None;
        for (v, &val) in values.iter().enumerate() {
            if argmax.is_none() || val > max {
                max = val;
                argmax = Some(v);
            }
        }
        MetricReport {
            kind,
            d,
            values,
            max,
            argmax,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MetricError {
    /// Exhaustive ordering search is restricted to `n <= 10`.
    ExhaustiveTooLarge { n: usize },
    Adm(AdmError),
}

impl fmt::Display for MetricError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricError::ExhaustiveTooLarge { n } => {
                write!(f, "exhaustive search rejected for n={n} > 10")
            }
            MetricError::Adm(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for MetricError {}

impl From<AdmError> for MetricError {
    fn from(e: AdmError) -> Self {
        MetricError::Adm(e)
    }
}

/// Evaluates `wcol_d`, `scol_d`, or `adm_d` of a fixed ordering.
///
/// `adm` values are computed per vertex with `adm_cfg` (exact search by
/// default); its node budget error propagates.
pub fn metric_of_ordering(
    graph: &PlanarGraph,
    ord: &VertexOrdering,
    d: usize,
    kind: MetricKind,
    adm_cfg: &AdmConfig,
) -> Result<MetricReport, MetricError> {
    let n = graph.vertex_count();
    let values = match kind {
        MetricKind::Wcol => {
            let sets = wreach_all(graph, ord, d);
            (0..n).map(|v| sets.size_of(v)).collect()
        }
        MetricKind::Scol => (0..n)
            .map(|v| sreach_vertex(graph, ord, d, v).len())
            .collect(),
        MetricKind::Adm => {
            let mut values = Vec::with_capacity(n);
            for v in 0..n {
                let result = adm::adm_vertex(graph, ord, d, v, adm_cfg)?;
                values.push(result.lower);
            }
            values
        }
    };
    Ok(MetricReport::from_values(kind, d, values))
}

/// Strategy for [`graph_min_metric`].
#[derive(Debug, Clone, Copy)]
pub enum MinStrategy {
    /// Enumerate all `n!` orderings; restricted to `n <= 10`.
    Exhaustive,
    /// Simulated annealing; returns the best ordering found (an upper bound
    /// on the graph parameter), deterministic for a fixed seed.
    Anneal { iterations: usize, seed: u64 },
}

/// Minimum metric value over vertex orderings, with a witness ordering.
pub fn graph_min_metric(
    graph: &PlanarGraph,
    d: usize,
    kind: MetricKind,
    strategy: MinStrategy,
) -> Result<(usize, VertexOrdering), MetricError> {
    let n = graph.vertex_count();
    let adm_cfg = AdmConfig::default();
    if n == 0 {
        return Ok((0, VertexOrdering::identity(0)));
    }
    match strategy {
        MinStrategy::Exhaustive => {
            if n > 10 {
                return Err(MetricError::ExhaustiveTooLarge { n });
            }
            let mut perm: Vec<usize> = (0..n).collect();
            let mut counters = vec![0usize; n];
            let mut best_value = usize::MAX;
            let mut best_order = perm.clone();
            let mut consider = |perm: &[usize],
                                best_value: &mut usize,
                                best_order: &mut Vec<usize>|
             -> Result<(), MetricError> {
                let ord = VertexOrdering::from_ids(perm.to_vec()).expect("permutation");
                let report = metric_of_ordering(graph, &ord, d, kind, &adm_cfg)?;
                if report.max < *best_value {
                    *best_value = report.max;
                    best_order.copy_from_slice(perm);
                }
                Ok(())
            };
            consider(&perm, &mut best_value, &mut best_order)?;
            // Heap's algorithm.
            let mut i = 0;
            while i < n {
                if counters[i] < i {
                    if i % 2 == 0 {
                        perm.swap(0, i);
                    } else {
                        perm.swap(counters[i], i);
                    }
                    consider(&perm, &mut best_value, &mut best_order)?;
                    counters[i] += 1;
                    i = 0;
                } else {
                    counters[i] = 0;
                    i += 1;
                }
            }
            Ok((
                best_value,
                VertexOrdering::from_ids(best_order).expect("permutation"),
            ))
        }
        MinStrategy::Anneal { iterations, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut current: Vec<usize> = (0..n).collect();
            let eval = |ids: &[usize]| -> Result<usize, MetricError> {
                let ord = VertexOrdering::from_ids(ids.to_vec()).expect("permutation");
                Ok(metric_of_ordering(graph, &ord, d, kind, &adm_cfg)?.max)
            };
            let mut current_value = eval(&current)?;
            let mut best = current.clone();
            let mut best_value = current_value;
            let mut temperature = 1.0f64;
            let cooling = crate::math::powf(0.01, 1.0 / iterations.max(1) as f64);
            for _ in 0..iterations {
                let a = rng.gen_range(0..n);
                let b = rng.gen_range(0..n);
                if a == b {
                    temperature *= cooling;
                    continue;
                }
                current.swap(a, b);
                let value = eval(&current)?;
                let delta = value as f64 - current_value as f64;
                let accept =
                    delta <= 0.0 || rng.gen::<f64>() < crate::math::exp(-delta / temperature);
                if accept {
                    current_value = value;
                    if value < best_value {
                        best_value = value;
                        best.copy_from_slice(&current);
                    }
                } else {
                    current.swap(a, b);
                }
                temperature *= cooling;
            }
            Ok((
                best_value,
                VertexOrdering::from_ids(best).expect("permutation"),
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn path3() -> PlanarGraph {
        // a--b--c as 0--1--2
        PlanarGraph::new(3, vec![(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn wreach_on_path_matches_hand_computation() {
        let g = path3();
        let ord = VertexOrdering::identity(3); // a ≺ b ≺ c
        let sets = wreach_all(&g, &ord, 2);
        let mut c = sets.sets[2].clone();
        c.sort_unstable();
        assert_eq!(c, vec![0, 1, 2]);
        let sets1 = wreach_all(&g, &ord, 1);
        let mut c1 = sets1.sets[2].clone();
        c1.sort_unstable();
        assert_eq!(c1, vec![1, 2]);
    }

    #[test]
    fn wreach_zero_is_reflexive_only() {
        let g = path3();
        let ord = VertexOrdering::from_ids(vec![1, 0, 2]).unwrap();
        let sets = wreach_all(&g, &ord, 0);
        for v in 0..3 {
            assert_eq!(sets.sets[v], vec![v]);
        }
    }

    #[test]
    fn sreach_on_path_excludes_low_detours() {
        // Route c -> b -> a fails strongly at d=2 because b ≺ c.
        let g = path3();
        let ord = VertexOrdering::identity(3);
        assert_eq!(sreach_vertex(&g, &ord, 2, 2), vec![1, 2]);
    }

    #[test]
    fn sreach_star_center_sees_all_leaves() {
        let g = PlanarGraph::new(4, vec![(3, 0), (3, 1), (3, 2)]).unwrap();
        let ord = VertexOrdering::identity(4); // leaves before center 3
        assert_eq!(sreach_vertex(&g, &ord, 1, 3), vec![0, 1, 2, 3]);
    }

    #[test]
    fn strong_sets_are_subsets_of_weak_sets() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let n = rng.gen_range(1..9);
            let mut edges = vec![];
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(0.4) {
                        edges.push((u, v));
                    }
                }
            }
            let budget = if n >= 3 { 3 * n - 6 } else { edges.len() };
            edges.truncate(budget);
            let g = PlanarGraph::new(n, edges).unwrap();
            let mut ids: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                let j = rng.gen_range(0..=i);
                ids.swap(i, j);
            }
            let ord = VertexOrdering::from_ids(ids).unwrap();
            for d in 0..4 {
                let weak = wreach_all(&g, &ord, d);
                let strong = sreach_all(&g, &ord, d);
                for v in 0..n {
                    // reflexive + rank dominance + monotone containment
                    assert!(weak.contains(v, v) && strong.contains(v, v));
                    for &u in &weak.sets[v] {
                        assert!(ord.rank(u) <= ord.rank(v));
                    }
                    for &u in &strong.sets[v] {
                        assert!(weak.contains(v, u), "strong ⊄ weak at v={v} u={u} d={d}");
                    }
                }
                if d > 0 {
                    let weak_prev = wreach_all(&g, &ord, d - 1);
                    let strong_prev = sreach_all(&g, &ord, d - 1);
                    for v in 0..n {
                        for &u in &weak_prev.sets[v] {
                            assert!(weak.contains(v, u));
                        }
                        for &u in &strong_prev.sets[v] {
                            assert!(strong.contains(v, u));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn k3_scol_is_three_for_any_ordering() {
        let g = PlanarGraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let ord = VertexOrdering::identity(3);
        let report =
            metric_of_ordering(&g, &ord, 1, MetricKind::Scol, &AdmConfig::default()).unwrap();
        assert_eq!(report.max, 3);
    }

    #[test]
    fn p3_wcol_example_ordering() {
        // ordering b ≺ a ≺ c with path a-b-c (ids 0-1-2)
        let g = path3();
        let ord = VertexOrdering::from_ids(vec![1, 0, 2]).unwrap();
        let report =
            metric_of_ordering(&g, &ord, 1, MetricKind::Wcol, &AdmConfig::default()).unwrap();
        assert_eq!(report.max, 2);
    }

    #[test]
    fn empty_graph_metrics() {
        let g = PlanarGraph::new(5, vec![]).unwrap();
        let ord = VertexOrdering::identity(5);
        for kind in [MetricKind::Wcol, MetricKind::Scol] {
            let report = metric_of_ordering(&g, &ord, 3, kind, &AdmConfig::default()).unwrap();
            assert_eq!(report.max, 1);
        }
        let adm = metric_of_ordering(&g, &ord, 3, MetricKind::Adm, &AdmConfig::default()).unwrap();
        assert_eq!(adm.max, 0);
    }

    #[test]
    fn exhaustive_min_on_small_graphs() {
        let k3 = PlanarGraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let (value, _) =
            graph_min_metric(&k3, 1, MetricKind::Scol, MinStrategy::Exhaustive).unwrap();
        assert_eq!(value, 3);

        let p3 = path3();
        let (value, witness) =
            graph_min_metric(&p3, 1, MetricKind::Wcol, MinStrategy::Exhaustive).unwrap();
        assert_eq!(value, 2);
        let report =
            metric_of_ordering(&p3, &witness, 1, MetricKind::Wcol, &AdmConfig::default()).unwrap();
        assert_eq!(report.max, 2);
    }

    #[test]
    fn exhaustive_rejected_above_ten_vertices() {
        let g = PlanarGraph::new(11, vec![]).unwrap();
        assert!(matches!(
            graph_min_metric(&g, 1, MetricKind::Wcol, MinStrategy::Exhaustive),
            Err(MetricError::ExhaustiveTooLarge { n: 11 })
        ));
    }

    #[test]
    fn anneal_is_deterministic_and_bounded_by_exhaustive() {
        let g = PlanarGraph::new(
            6,
            vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 2)],
        )
        .unwrap();
        let strategy = MinStrategy::Anneal {
            iterations: 300,
            seed: 5,
        };
        let (a, _) = graph_min_metric(&g, 2, MetricKind::Wcol, strategy).unwrap();
        let (b, _) = graph_min_metric(&g, 2, MetricKind::Wcol, strategy).unwrap();
        assert_eq!(a, b);
        let (exact, _) =
            graph_min_metric(&g, 2, MetricKind::Wcol, MinStrategy::Exhaustive).unwrap();
        assert!(a >= exact);
    }
}
