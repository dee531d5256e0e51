//! Small Dinic max-flow over integer capacities, plus a vertex-disjoint
//! path extractor for Menger-style certificates.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::PlanarGraph;

#[derive(Debug, Clone)]
struct Edge {
    to: usize,
    cap: u32,
}

/// Directed flow network; every `add_edge` also installs the reverse edge
/// with capacity zero.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            edges: Vec::new(),
            adj: vec![Vec::new(); nodes],
            level: vec![0; nodes],
            iter: vec![0; nodes],
        }
    }

    /// Adds a directed edge and returns its index for [`Self::flow_on`].
    pub fn add_edge(&mut self, from: usize, to: usize, cap: u32) -> usize {
        let id = self.edges.len();
        self.edges.push(Edge { to, cap });
        self.edges.push(Edge { to: from, cap: 0 });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id / 2
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        let mut queue = VecDeque::new();
        self.level[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for &id in &self.adj[v] {
                let e = &self.edges[id];
                if e.cap > 0 && self.level[e.to] < 0 {
                    self.level[e.to] = self.level[v] + 1;
                    queue.push_back(e.to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, v: usize, t: usize, f: u32) -> u32 {
        if v == t {
            return f;
        }
        while self.iter[v] < self.adj[v].len() {
            let id = self.adj[v][self.iter[v]];
            let (to, cap) = (self.edges[id].to, self.edges[id].cap);
            if cap > 0 && self.level[v] < self.level[to] {
                let d = self.dfs(to, t, f.min(cap));
                if d > 0 {
                    self.edges[id].cap -= d;
                    self.edges[id ^ 1].cap += d;
                    return d;
                }
            }
            self.iter[v] += 1;
        }
        0
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> u32 {
        let mut flow = 0;
        while self.bfs(s, t) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, u32::MAX);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
        flow
    }

    /// Net flow currently on the `k`th added edge.
    pub fn flow_on(&self, k: usize) -> u32 {
        self.edges[2 * k + 1].cap
    }
}

/// A maximum family of fully vertex-disjoint paths between two vertex sets.
#[derive(Debug, Clone)]
pub struct DisjointPaths {
    pub count: usize,
    /// Vertex sequences, each starting in the source set and ending in the
    /// target set; pairwise vertex-disjoint including endpoints.
    pub paths: Vec<Vec<usize>>,
}

/// Computes a maximum family of vertex-disjoint paths from `sources` to
/// `targets` inside the subgraph induced by `allowed`.
///
/// All vertex capacities are one (endpoints included). A vertex lying in
/// both sets yields the corresponding one-vertex path.
pub fn vertex_disjoint_paths(
    graph: &PlanarGraph,
    allowed: &[bool],
    sources: &[usize],
    targets: &[usize],
) -> DisjointPaths {
    let n = graph.vertex_count();
    // node 2v = in, 2v+1 = out, 2n = super source, 2n+1 = super sink
    let mut net = FlowNetwork::new(2 * n + 2);
    for v in 0..n {
        if allowed[v] {
            net.add_edge(2 * v, 2 * v + 1, 1);
        }
    }
    let mut arc_ids = Vec::new();
    for &(u, v) in graph.edges() {
        if allowed[u] && allowed[v] {
            arc_ids.push((net.add_edge(2 * u + 1, 2 * v, 1), u, v));
            arc_ids.push((net.add_edge(2 * v + 1, 2 * u, 1), v, u));
        }
    }
    let source_arcs: Vec<(usize, usize)> = sources
        .iter()
        .map(|&s| (net.add_edge(2 * n, 2 * s, 1), s))
        .collect();
    for &t in targets {
        net.add_edge(2 * t + 1, 2 * n + 1, 1);
    }
    let count = net.max_flow(2 * n, 2 * n + 1) as usize;

    // Net flow per ordered pair; unit vertex capacities make the successor
    // of each vertex unique.
    let mut successor = vec![usize::MAX; n];
    let mut pair_flow = alloc::collections::BTreeMap::new();
    for &(k, u, v) in &arc_ids {
        let f = net.flow_on(k) as i64;
        if f != 0 {
            *pair_flow.entry((u.min(v), u.max(v))).or_insert(0i64) +=
                if u < v { f } else { -f };
        }
    }
    for (&(a, b), &f) in &pair_flow {
        if f > 0 {
            successor[a] = b;
        } else if f < 0 {
            successor[b] = a;
        }
    }
    let mut paths = Vec::new();
    for &(k, s) in &source_arcs {
        if net.flow_on(k) == 0 {
            continue;
        }
        let mut path = vec![s];
        let mut cur = s;
        while successor[cur] != usize::MAX {
            cur = successor[cur];
            path.push(cur);
        }
        paths.push(path);
    }
    debug_assert_eq!(paths.len(), count);
    DisjointPaths { count, paths }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn grid_columns_give_full_disjoint_family() {
        // 3x3 grid, row-major ids; top row to bottom row admits 3 paths.
        let mut edges = vec![];
        for r in 0..3 {
            for c in 0..3 {
                let v = 3 * r + c;
                if c + 1 < 3 {
                    edges.push((v, v + 1));
                }
                if r + 1 < 3 {
                    edges.push((v, v + 3));
                }
            }
        }
        let g = PlanarGraph::new(9, edges).unwrap();
        let allowed = vec![true; 9];
        let result = vertex_disjoint_paths(&g, &allowed, &[0, 1, 2], &[6, 7, 8]);
        assert_eq!(result.count, 3);
        let mut seen = vec![false; 9];
        for path in &result.paths {
            assert!([0, 1, 2].contains(&path[0]));
            assert!([6, 7, 8].contains(path.last().unwrap()));
            for w in path.windows(2) {
                assert!(g.has_edge(w[0], w[1]));
            }
            for &v in path {
                assert!(!seen[v], "vertex {v} reused");
                seen[v] = true;
            }
        }
    }

    #[test]
    fn single_cut_vertex_limits_flow() {
        // Two triangles joined at vertex 2: only one disjoint path.
        let g = PlanarGraph::new(
            5,
            vec![(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)],
        )
        .unwrap();
        let allowed = vec![true; 5];
        let result = vertex_disjoint_paths(&g, &allowed, &[0, 1], &[3, 4]);
        assert_eq!(result.count, 1);
    }

    #[test]
    fn source_equal_to_target_is_a_one_vertex_path() {
        let g = PlanarGraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let allowed = vec![true; 3];
        let result = vertex_disjoint_paths(&g, &allowed, &[1], &[1]);
        assert_eq!(result.count, 1);
        assert_eq!(result.paths, vec![vec![1]]);
    }

    #[test]
    fn disallowed_vertices_block_paths() {
        let g = PlanarGraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let mut allowed = vec![true; 3];
        allowed[1] = false;
        let result = vertex_disjoint_paths(&g, &allowed, &[0], &[2]);
        assert_eq!(result.count, 0);
    }
}
