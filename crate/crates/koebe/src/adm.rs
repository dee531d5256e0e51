//! Exact and bounded computation of vertex admissibility.
//!
//! `adm_d(v)` is the maximum number of strong reachability paths of length
//! at most `d` (exactly `d` with the strict-length flag) that start at `v`
//! and share no vertex besides `v`. The exact solver runs a branch-and-bound
//! over disjoint-path packings; the bounds mode returns a greedy witness
//! family and a length-oblivious max-flow upper bound.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::flow::FlowNetwork;
use crate::graph::{PlanarGraph, VertexOrdering};

/// How much work [`adm_vertex`] is allowed to do.
#[derive(Debug, Clone, Copy)]
pub struct AdmConfig {
    pub mode: AdmMode,
    /// Node-expansion budget of the exact search.
    pub budget: u64,
    /// Count only families whose paths have exactly `d` edges.
    pub strict_length: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdmMode {
    Exact,
    Bounds,
}

impl Default for AdmConfig {
    fn default() -> Self {
        AdmConfig {
            mode: AdmMode::Exact,
            budget: 10_000_000,
            strict_length: false,
        }
    }
}

impl AdmConfig {
    pub fn bounds() -> Self {
        AdmConfig {
            mode: AdmMode::Bounds,
            ..AdmConfig::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdmError {
    /// The exact search exceeded its node-expansion budget.
    BudgetExceeded { budget: u64 },
}

impl fmt::Display for AdmError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdmError::BudgetExceeded { budget } => {
                write!(f, "admissibility search exceeded {budget} expansions")
            }
        }
    }
}

impl core::error::Error for AdmError {}

/// Result of an admissibility computation at one vertex.
///
/// `paths` is a family realizing `lower`; `upper` is proven. Exact mode
/// returns `lower == upper`.
#[derive(Debug, Clone)]
pub struct AdmCertificate {
    pub vertex: usize,
    pub d: usize,
    pub paths: Vec<Vec<usize>>,
    pub lower: usize,
    pub upper: usize,
}

impl AdmCertificate {
    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }
}

/// Reasons a path family fails to witness admissibility.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyViolation {
    EmptyPath,
    WrongStart { path: usize },
    NotAnEdge { path: usize, u: usize, v: usize },
    TooLong { path: usize, len: usize },
    WrongLength { path: usize, len: usize },
    EndpointNotSmaller { path: usize, end: usize },
    InternalNotLarger { path: usize, vertex: usize },
    SharedVertex { vertex: usize },
    Revisit { path: usize, vertex: usize },
}

impl fmt::Display for FamilyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Checks that `paths` is a valid family of strong reachability paths of
/// length at most `d` (exactly `d` when `strict`) from `v`, pairwise
/// vertex-disjoint apart from `v`.
pub fn validate_family(
    graph: &PlanarGraph,
    ord: &VertexOrdering,
    d: usize,
    v: usize,
    paths: &[Vec<usize>],
    strict: bool,
) -> Result<(), FamilyViolation> {
    let mut used = vec![false; graph.vertex_count()];
    for (i, path) in paths.iter().enumerate() {
        if path.len() < 2 {
            return Err(FamilyViolation::EmptyPath);
        }
        if path[0] != v {
            return Err(FamilyViolation::WrongStart { path: i });
        }
        let len = path.len() - 1;
        if len > d {
            return Err(FamilyViolation::TooLong { path: i, len });
        }
        if strict && len != d {
            return Err(FamilyViolation::WrongLength { path: i, len });
        }
        for w in path.windows(2) {
            if !graph.has_edge(w[0], w[1]) {
                return Err(FamilyViolation::NotAnEdge {
                    path: i,
                    u: w[0],
                    v: w[1],
                });
            }
        }
        let end = *path.last().unwrap();
        if ord.rank(end) >= ord.rank(v) {
            return Err(FamilyViolation::EndpointNotSmaller { path: i, end });
        }
        for &w in &path[1..path.len() - 1] {
            if ord.rank(w) <= ord.rank(v) {
                return Err(FamilyViolation::InternalNotLarger { path: i, vertex: w });
            }
        }
        let mut on_path = alloc::collections::BTreeSet::new();
        for &w in path.iter() {
            if !on_path.insert(w) {
                return Err(FamilyViolation::Revisit { path: i, vertex: w });
            }
        }
        for &w in &path[1..] {
            if used[w] {
                return Err(FamilyViolation::SharedVertex { vertex: w });
            }
            used[w] = true;
        }
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Role {
    /// Smaller than `v` in the ordering: a legal path endpoint.
    Target,
    /// Larger than `v`: a legal internal vertex.
    Internal,
    Origin,
}

struct Search<'a> {
    graph: &'a PlanarGraph,
    role: Vec<Role>,
    v: usize,
    anchors: Vec<usize>,
    d: usize,
    strict: bool,
    used: Vec<bool>,
    stack: Vec<usize>,
    current: Vec<Vec<usize>>,
    best: usize,
    best_family: Vec<Vec<usize>>,
    expansions: u64,
    budget: u64,
}

impl<'a> Search<'a> {
    fn tick(&mut self) -> Result<(), AdmError> {
        self.expansions += 1;
        if self.expansions > self.budget {
            return Err(AdmError::BudgetExceeded {
                budget: self.budget,
            });
        }
        Ok(())
    }

    /// Max-flow bound on how many further disjoint paths can still be added.
    fn flow_bound(&self, anchor_from: usize) -> usize {
        let n = self.graph.vertex_count();
        let mut net = FlowNetwork::new(2 * n + 2);
        let source = 2 * n;
        let sink = 2 * n + 1;
        let mut remaining_anchors = 0;
        for &nb in &self.anchors[anchor_from..] {
            if !self.used[nb] {
                net.add_edge(source, 2 * nb, 1);
                remaining_anchors += 1;
            }
        }
        if remaining_anchors == 0 {
            return 0;
        }
        for w in 0..n {
            if self.used[w] || w == self.v {
                continue;
            }
            match self.role[w] {
                Role::Internal => {
                    net.add_edge(2 * w, 2 * w + 1, 1);
                }
                Role::Target => {
                    net.add_edge(2 * w, sink, 1);
                }
                Role::Origin => {}
            }
        }
        for &(a, b) in self.graph.edges() {
            if a == self.v || b == self.v || self.used[a] || self.used[b] {
                continue;
            }
            match (self.role[a], self.role[b]) {
                (Role::Internal, Role::Internal) => {
                    net.add_edge(2 * a + 1, 2 * b, 1);
                    net.add_edge(2 * b + 1, 2 * a, 1);
                }
                (Role::Internal, Role::Target) => {
                    net.add_edge(2 * a + 1, 2 * b, 1);
                }
                (Role::Target, Role::Internal) => {
                    net.add_edge(2 * b + 1, 2 * a, 1);
                }
                _ => {}
            }
        }
        net.max_flow(source, sink) as usize
    }

    /// Branches over the anchor (first vertex after `v`) of the next path.
    fn family_search(&mut self, anchor_from: usize) -> Result<(), AdmError> {
        self.tick()?;
        if self.current.len() > self.best {
            self.best = self.current.len();
            self.best_family = self.current.clone();
        }
        if anchor_from >= self.anchors.len() {
            return Ok(());
        }
        let bound = self.current.len() + self.flow_bound(anchor_from);
        if bound <= self.best {
            return Ok(());
        }
        for i in anchor_from..self.anchors.len() {
            let nb = self.anchors[i];
            if self.used[nb] {
                continue;
            }
            match self.role[nb] {
                Role::Target => {
                    if !self.strict || self.d == 1 {
                        self.used[nb] = true;
                        self.current.push(vec![self.v, nb]);
                        self.family_search(i + 1)?;
                        self.current.pop();
                        self.used[nb] = false;
                    }
                }
                Role::Internal => {
                    if self.d >= 2 {
                        self.used[nb] = true;
                        self.stack.push(nb);
                        self.extend(i, 1)?;
                        self.stack.pop();
                        self.used[nb] = false;
                    }
                }
                Role::Origin => {}
            }
        }
        Ok(())
    }

    /// Extends the open path whose anchor has index `anchor_idx`.
    fn extend(&mut self, anchor_idx: usize, len: usize) -> Result<(), AdmError> {
        self.tick()?;
        let tip = *self.stack.last().unwrap();
        for ni in 0..self.graph.neighbors(tip).len() {
            let y = self.graph.neighbors(tip)[ni];
            if self.used[y] || y == self.v {
                continue;
            }
            match self.role[y] {
                Role::Target => {
                    let closes = if self.strict {
                        len + 1 == self.d
                    } else {
                        len + 1 <= self.d
                    };
                    if closes {
                        self.used[y] = true;
                        let mut path = Vec::with_capacity(self.stack.len() + 2);
                        path.push(self.v);
                        path.extend_from_slice(&self.stack);
                        path.push(y);
                        self.current.push(path);
                        self.family_search(anchor_idx + 1)?;
                        self.current.pop();
                        self.used[y] = false;
                    }
                }
                Role::Internal => {
                    if len + 1 <= self.d.saturating_sub(1) {
                        self.used[y] = true;
                        self.stack.push(y);
                        self.extend(anchor_idx, len + 1)?;
                        self.stack.pop();
                        self.used[y] = false;
                    }
                }
                Role::Origin => {}
            }
        }
        Ok(())
    }
}

fn roles(ord: &VertexOrdering, v: usize, n: usize) -> Vec<Role> {
    (0..n)
        .map(|w| {
            if w == v {
                Role::Origin
            } else if ord.rank(w) < ord.rank(v) {
                Role::Target
            } else {
                Role::Internal
            }
        })
        .collect()
}

/// Greedy family of short disjoint strong reachability paths (lower bound).
fn greedy_family(
    graph: &PlanarGraph,
    role: &[Role],
    v: usize,
    d: usize,
    strict: bool,
) -> Vec<Vec<usize>> {
    let n = graph.vertex_count();
    let mut used = vec![false; n];
    let mut family = Vec::new();
    if strict {
        // Depth-first search for one exact-length path at a time.
        loop {
            let mut stack = vec![v];
            let mut found: Option<Vec<usize>> = None;
            let mut steps = 0usize;
            fn dfs(
                graph: &PlanarGraph,
                role: &[Role],
                used: &mut [bool],
                stack: &mut Vec<usize>,
                d: usize,
                steps: &mut usize,
                found: &mut Option<Vec<usize>>,
            ) {
                if found.is_some() || *steps > 200_000 {
                    return;
                }
                *steps += 1;
                let len = stack.len() - 1;
                let tip = *stack.last().unwrap();
                for &y in graph.neighbors(tip) {
                    if found.is_some() {
                        return;
                    }
                    if used[y] || stack.contains(&y) {
                        continue;
                    }
                    match role[y] {
                        Role::Target if len + 1 == d => {
                            let mut path = stack.clone();
                            path.push(y);
                            *found = Some(path);
                            return;
                        }
                        Role::Internal if len + 1 <= d.saturating_sub(1) => {
                            stack.push(y);
                            dfs(graph, role, used, stack, d, steps, found);
                            stack.pop();
                        }
                        _ => {}
                    }
                }
            }
            dfs(graph, role, &mut used, &mut stack, d, &mut steps, &mut found);
            match found {
                Some(path) => {
                    for &w in &path[1..] {
                        used[w] = true;
                    }
                    family.push(path);
                }
                None => break,
            }
        }
        return family;
    }
    // Shortest-path-first greedy via repeated restricted BFS.
    let mut parent = vec![usize::MAX; n];
    let mut dist = vec![usize::MAX; n];
    loop {
        parent.iter_mut().for_each(|p| *p = usize::MAX);
        dist.iter_mut().for_each(|x| *x = usize::MAX);
        let mut queue = VecDeque::new();
        dist[v] = 0;
        queue.push_back(v);
        let mut hit: Option<(usize, usize)> = None; // (target, predecessor)
        'bfs: while let Some(x) = queue.pop_front() {
            for &y in graph.neighbors(x) {
                if used[y] || y == v {
                    continue;
                }
                match role[y] {
                    Role::Target => {
                        if dist[x] + 1 <= d {
                            hit = Some((y, x));
                            break 'bfs;
                        }
                    }
                    Role::Internal => {
                        if dist[y] == usize::MAX && dist[x] + 1 <= d.saturating_sub(1) {
                            dist[y] = dist[x] + 1;
                            parent[y] = x;
                            queue.push_back(y);
                        }
                    }
                    Role::Origin => {}
                }
            }
        }
        match hit {
            Some((target, pred)) => {
                let mut rev = vec![target];
                let mut cur = pred;
                while cur != v {
                    rev.push(cur);
                    cur = parent[cur];
                }
                rev.push(v);
                rev.reverse();
                for &w in &rev[1..] {
                    used[w] = true;
                }
                family.push(rev);
            }
            None => break,
        }
    }
    family
}

/// Computes `adm_d(v)` for the given ordering.
///
/// Bounds mode returns a greedy witness (`lower`) and a flow upper bound
/// that ignores the length restriction. Exact mode closes the gap by
/// branch-and-bound and errors out past `cfg.budget` expansions.
pub fn adm_vertex(
    graph: &PlanarGraph,
    ord: &VertexOrdering,
    d: usize,
    v: usize,
    cfg: &AdmConfig,
) -> Result<AdmCertificate, AdmError> {
    let n = graph.vertex_count();
    let role = roles(ord, v, n);
    if d == 0 {
        return Ok(AdmCertificate {
            vertex: v,
            d,
            paths: vec![],
            lower: 0,
            upper: 0,
        });
    }
    let greedy = greedy_family(graph, &role, v, d, cfg.strict_length);
    let mut anchors: Vec<usize> = graph.neighbors(v).to_vec();
    anchors.sort_unstable();
    let mut search = Search {
        graph,
        role,
        v,
        anchors,
        d,
        strict: cfg.strict_length,
        used: vec![false; n],
        stack: Vec::new(),
        current: Vec::new(),
        best: greedy.len(),
        best_family: greedy.clone(),
        expansions: 0,
        budget: cfg.budget,
    };
    let flow_upper = search.flow_bound(0);
    debug_assert!(
        validate_family(graph, ord, d, v, &search.best_family, cfg.strict_length).is_ok()
    );
    match cfg.mode {
        AdmMode::Bounds => Ok(AdmCertificate {
            vertex: v,
            d,
            paths: greedy,
            lower: search.best,
            upper: flow_upper.max(search.best),
        }),
        AdmMode::Exact => {
            search.family_search(0)?;
            debug_assert!(
                validate_family(graph, ord, d, v, &search.best_family, cfg.strict_length).is_ok()
            );
            Ok(AdmCertificate {
                vertex: v,
                d,
                paths: search.best_family.clone(),
                lower: search.best,
                upper: search.best,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn star_center_has_full_admissibility() {
        // K_{1,3}: leaves 0..2 before center 3; adm_1(center) = 3.
        let g = PlanarGraph::new(4, vec![(3, 0), (3, 1), (3, 2)]).unwrap();
        let ord = VertexOrdering::identity(4);
        let cert = adm_vertex(&g, &ord, 1, 3, &AdmConfig::default()).unwrap();
        assert_eq!(cert.lower, 3);
        assert_eq!(cert.upper, 3);
        assert!(validate_family(&g, &ord, 1, 3, &cert.paths, false).is_ok());
    }

    #[test]
    fn path_tail_has_single_path() {
        // a-b-c ordered a ≺ b ≺ c: adm_2(c) = 1.
        let g = PlanarGraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let ord = VertexOrdering::identity(3);
        let cert = adm_vertex(&g, &ord, 2, 2, &AdmConfig::default()).unwrap();
        assert_eq!(cert.lower, 1);
    }

    #[test]
    fn adm_bounded_by_strong_reachability() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..30 {
            let n = rng.gen_range(2..8);
            let mut edges = vec![];
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(0.5) {
                        edges.push((u, v));
                    }
                }
            }
            let budget = if n >= 3 { 3 * n - 6 } else { edges.len() };
            edges.truncate(budget);
            let g = PlanarGraph::new(n, edges).unwrap();
            let ord = VertexOrdering::identity(n);
            for d in 1..4 {
                for v in 0..n {
                    let cert = adm_vertex(&g, &ord, d, v, &AdmConfig::default()).unwrap();
                    let sreach = crate::reach::sreach_vertex(&g, &ord, d, v);
                    assert!(
                        cert.lower + 1 <= sreach.len().max(1),
                        "adm {} vs sreach {:?}",
                        cert.lower,
                        sreach
                    );
                }
            }
        }
    }

    #[test]
    fn bounds_mode_brackets_exact_value() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..30 {
            let n = rng.gen_range(3..9);
            let mut edges = vec![];
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(0.45) {
                        edges.push((u, v));
                    }
                }
            }
            let budget = if n >= 3 { 3 * n - 6 } else { edges.len() };
            edges.truncate(budget);
            let g = PlanarGraph::new(n, edges).unwrap();
            let ord = VertexOrdering::identity(n);
            for d in 1..4 {
                for v in 0..n {
                    let exact = adm_vertex(&g, &ord, d, v, &AdmConfig::default()).unwrap();
                    let bounds = adm_vertex(&g, &ord, d, v, &AdmConfig::bounds()).unwrap();
                    assert!(bounds.lower <= exact.lower);
                    assert!(exact.lower <= bounds.upper);
                }
            }
        }
    }

    #[test]
    fn budget_violation_is_reported() {
        let mut edges = vec![];
        for u in 0..10usize {
            for v in (u + 1)..10 {
                if edges.len() < 24 {
                    edges.push((u, v));
                }
            }
        }
        let g = PlanarGraph::new(10, edges).unwrap();
        let ord = VertexOrdering::identity(10);
        let cfg = AdmConfig {
            budget: 3,
            ..AdmConfig::default()
        };
        assert!(matches!(
            adm_vertex(&g, &ord, 3, 9, &cfg),
            Err(AdmError::BudgetExceeded { budget: 3 })
        ));
    }

    #[test]
    fn strict_length_counts_exact_length_paths_only() {
        // Path graph0-1-2-3 with 3 last: strict d=2 admits one path 3-2-1? No:
        // 3's only neighbor is 2 (internal), then endpoint 1 at length 2.
        let g = PlanarGraph::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        let ord = VertexOrdering::identity(4);
        let strict = AdmConfig {
            strict_length: true,
            ..AdmConfig::default()
        };
        let cert = adm_vertex(&g, &ord, 2, 3, &strict).unwrap();
        assert_eq!(cert.lower, 1);
        assert_eq!(cert.paths, vec![vec![3, 2, 1]]);
        // d=1 strict: the single edge 3-2 ends at an internal-ranked vertex? 2 ≺ 3 so it closes.
        let cert1 = adm_vertex(&g, &ord, 1, 3, &strict).unwrap();
        assert_eq!(cert1.lower, 1);
        // d=3 strict: 3-2-1-0 works.
        let cert3 = adm_vertex(&g, &ord, 3, 3, &strict).unwrap();
        assert_eq!(cert3.lower, 1);
        assert_eq!(cert3.paths, vec![vec![3, 2, 1, 0]]);
    }

    #[test]
    fn validate_family_rejects_injected_faults() {
        let g = PlanarGraph::new(4, vec![(3, 0), (3, 1), (3, 2), (0, 1)]).unwrap();
        let ord = VertexOrdering::identity(4);
        // shared internal vertex
        let fam = vec![vec![3, 0], vec![3, 0]];
        assert!(matches!(
            validate_family(&g, &ord, 2, 3, &fam, false),
            Err(FamilyViolation::SharedVertex { vertex: 0 })
        ));
        // non-edge
        let fam = vec![vec![3, 0], vec![3, 2], vec![2, 1]];
        assert!(validate_family(&g, &ord, 2, 3, &fam, false).is_err());
        // too long
        let fam = vec![vec![3, 1, 0]];
        assert!(matches!(
            validate_family(&g, &ord, 1, 3, &fam, false),
            Err(FamilyViolation::TooLong { path: 0, len: 2 })
        ));
    }
}
