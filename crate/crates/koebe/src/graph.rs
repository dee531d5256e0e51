//! Planar graph representation, combinatorial embeddings, and vertex
//! orderings.
//!
//! Vertices are dense ids `0..n-1`. Inputs are expected to carry their own
//! embedding (a rotation system) where one is needed; the crate performs no
//! general planarity test, only the necessary `m <= 3n - 6` budget check.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Errors raised while constructing or traversing graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    SelfLoop(usize),
    DuplicateEdge(usize, usize),
    VertexOutOfRange { vertex: usize, n: usize },
    /// `m > 3n - 6` on `n >= 3` vertices: cannot be planar.
    EdgeBudget { n: usize, m: usize },
    /// Rotation does not list exactly the neighbors of each vertex.
    RotationMismatch(usize),
    RotationMissing,
    /// Face traversal contradicts Euler's formula; not a planar embedding.
    EulerCheck { n: usize, m: usize, f: usize },
    Disconnected,
    NotAPermutation(String),
    FaceOutOfRange { face: usize, count: usize },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::SelfLoop(v) => write!(f, "self-loop at vertex {v}"),
            GraphError::DuplicateEdge(u, v) => write!(f, "duplicate edge {u}-{v}"),
            GraphError::VertexOutOfRange { vertex, n } => {
                write!(f, "vertex {vertex} out of range for n={n}")
            }
            GraphError::EdgeBudget { n, m } => {
                write!(f, "{m} edges exceed planar budget 3*{n}-6")
            }
            GraphError::RotationMismatch(v) => {
                write!(f, "rotation at vertex {v} does not match its neighbor set")
            }
            GraphError::RotationMissing => write!(f, "graph carries no rotation system"),
            GraphError::EulerCheck { n, m, f: faces } => {
                write!(f, "Euler check failed: n={n}, m={m}, f={faces}")
            }
            GraphError::Disconnected => write!(f, "graph is not connected"),
            GraphError::NotAPermutation(s) => write!(f, "not a permutation: {s}"),
            GraphError::FaceOutOfRange { face, count } => {
                write!(f, "face id {face} out of range ({count} faces)")
            }
        }
    }
}

impl core::error::Error for GraphError {}

/// Simple undirected graph on `0..n-1` with an optional rotation system.
#[derive(Debug, Clone)]
pub struct PlanarGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    rotation: Option<Vec<Vec<usize>>>,
}

impl PlanarGraph {
    /// Builds a graph, validating simplicity and the planar edge budget.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let mut normalized = Vec::with_capacity(edges.len());
        for &(u, v) in &edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if u >= n {
                return Err(GraphError::VertexOutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
            normalized.push(if u < v { (u, v) } else { (v, u) });
        }
        normalized.sort_unstable();
        for w in normalized.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        if n >= 3 && normalized.len() > 3 * n - 6 {
            return Err(GraphError::EdgeBudget {
                n,
                m: normalized.len(),
            });
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &normalized {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        Ok(PlanarGraph {
            n,
            edges: normalized,
            adjacency,
            rotation: None,
        })
    }

    /// Attaches a rotation system (cyclic neighbor order per vertex).
    pub fn with_rotation(mut self, rotation: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        if rotation.len() != self.n {
            return Err(GraphError::RotationMismatch(rotation.len().min(self.n)));
        }
        for (v, neighbors) in rotation.iter().enumerate() {
            let mut sorted = neighbors.clone();
            sorted.sort_unstable();
            let mut expected = self.adjacency[v].clone();
            expected.sort_unstable();
            if sorted != expected {
                return Err(GraphError::RotationMismatch(v));
            }
        }
        self.rotation = Some(rotation);
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as ordered pairs `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].iter().any(|&w| w == v)
    }

    pub fn rotation(&self) -> Option<&[Vec<usize>]> {
        self.rotation.as_deref()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }
}

/// Faces of an embedded graph, each a directed-edge cycle.
#[derive(Debug, Clone)]
pub struct FaceSet {
    faces: Vec<Vec<usize>>,
}

impl FaceSet {
    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn face(&self, id: usize) -> &[usize] {
        &self.faces[id]
    }
}

/// Traces the faces of a connected embedded graph.
///
/// From a directed edge `(u, v)` the traversal continues with `(v, w)` where
/// `w` precedes `u` in the rotation at `v`; every directed edge lies on
/// exactly one face. Euler's formula `n - m + f = 2` is asserted afterwards,
/// which rejects rotations that do not describe a planar (genus-0) embedding.
pub fn trace_faces(graph: &PlanarGraph) -> Result<FaceSet, GraphError> {
    let rotation = graph.rotation().ok_or(GraphError::RotationMissing)?;
    if !graph.is_connected() {
        return Err(GraphError::Disconnected);
    }
    let n = graph.vertex_count();
    let m = graph.edge_count();

    // Position of u within rotation[v], for O(1) "next edge" lookups.
    let mut pos = vec![Vec::new(); n];
    for v in 0..n {
        pos[v] = vec![usize::MAX; n.min(rotation[v].len())];
    }
    // Map neighbor -> index via a dense scratch table per vertex.
    let mut index_of = vec![usize::MAX; n];
    let mut pos_of: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for v in 0..n {
        for (i, &w) in rotation[v].iter().enumerate() {
            index_of[w] = i;
        }
        pos_of[v] = rotation[v]
            .iter()
            .map(|&w| (w, index_of[w]))
            .collect();
        for &w in rotation[v].iter() {
            index_of[w] = usize::MAX;
        }
    }
    let lookup = |v: usize, w: usize| -> usize {
        pos_of[v]
            .iter()
            .find(|&&(nb, _)| nb == w)
            .map(|&(_, i)| i)
            .expect("rotation validated against adjacency")
    };

    let mut visited = vec![false; 2 * m];
    // Directed edge id: index into a flat list.
    let mut dir_edges = Vec::with_capacity(2 * m);
    let mut edge_id = vec![Vec::new(); n];
    for v in 0..n {
        for &w in rotation[v].iter() {
            edge_id[v].push(dir_edges.len());
            dir_edges.push((v, w));
        }
    }
    let id_of = |v: usize, w: usize| -> usize { edge_id[v][lookup(v, w)] };

    let mut faces = Vec::new();
    for start in 0..dir_edges.len() {
        if visited[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let (mut u, mut v) = dir_edges[start];
        loop {
            let id = id_of(u, v);
            if visited[id] {
                break;
            }
            visited[id] = true;
            cycle.push(u);
            // next edge: (v, w) with w the predecessor of u in rotation at v
            let i = lookup(v, u);
            let rot = &rotation[v];
            let w = rot[(i + rot.len() - 1) % rot.len()];
            u = v;
            v = w;
        }
        faces.push(cycle);
    }

    let f = faces.len();
    if n < 2 || n - m + f != 2 {
        return Err(GraphError::EulerCheck { n, m, f });
    }
    debug_assert_eq!(faces.iter().map(|c| c.len()).sum::<usize>(), 2 * m);
    Ok(FaceSet { faces })
}

/// True iff every face except possibly `outer_face` is a triangle.
pub fn is_triangulation(
    graph: &PlanarGraph,
    faces: &FaceSet,
    outer_face: usize,
) -> Result<bool, GraphError> {
    let _ = graph;
    if outer_face >= faces.len() {
        return Err(GraphError::FaceOutOfRange {
            face: outer_face,
            count: faces.len(),
        });
    }
    Ok(faces
        .faces()
        .iter()
        .enumerate()
        .all(|(id, cycle)| id == outer_face || cycle.len() == 3))
}

/// Total vertex order with O(1) rank lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexOrdering {
    order: Vec<usize>,
    rank: Vec<usize>,
}

impl VertexOrdering {
    /// Builds an ordering from a permutation of `0..n-1`; position 0 is the
    /// minimum of the order.
    pub fn from_ids(ids: Vec<usize>) -> Result<Self, GraphError> {
        let n = ids.len();
        let mut rank = vec![usize::MAX; n];
        for (position, &v) in ids.iter().enumerate() {
            if v >= n {
                return Err(GraphError::NotAPermutation(alloc::format!(
                    "id {v} out of range for n={n}"
                )));
            }
            if rank[v] != usize::MAX {
                return Err(GraphError::NotAPermutation(alloc::format!(
                    "id {v} appears twice"
                )));
            }
            rank[v] = position;
        }
        Ok(VertexOrdering { order: ids, rank })
    }

    pub fn identity(n: usize) -> Self {
        VertexOrdering {
            order: (0..n).collect(),
            rank: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Vertex at the given position (0 = minimum).
    pub fn vertex_at(&self, position: usize) -> usize {
        self.order[position]
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn rank(&self, v: usize) -> usize {
        self.rank[v]
    }

    /// True iff `u` is strictly earlier than `v`.
    pub fn lt(&self, u: usize, v: usize) -> bool {
        self.rank[u] < self.rank[v]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> PlanarGraph {
        PlanarGraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn k4_embedded() -> PlanarGraph {
        let g = PlanarGraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        // Tetrahedron: vertex 3 inside triangle 0-1-2 (all faces triangles).
        g.with_rotation(vec![
            vec![1, 3, 2],
            vec![2, 3, 0],
            vec![0, 3, 1],
            vec![0, 1, 2],
        ])
        .unwrap()
    }

    #[test]
    fn loads_k3() {
        let g = k3();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn rejects_self_loop() {
        assert!(matches!(
            PlanarGraph::new(3, vec![(0, 0)]),
            Err(GraphError::SelfLoop(0))
        ));
    }

    #[test]
    fn rejects_k5_edge_budget() {
        let mut edges = Vec::new();
        for u in 0..5 {
            for v in (u + 1)..5 {
                edges.push((u, v));
            }
        }
        assert!(matches!(
            PlanarGraph::new(5, edges),
            Err(GraphError::EdgeBudget { n: 5, m: 10 })
        ));
    }

    #[test]
    fn rejects_duplicate_edge_in_either_orientation() {
        assert!(matches!(
            PlanarGraph::new(3, vec![(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(0, 1))
        ));
    }

    #[test]
    fn k3_has_two_triangular_faces() {
        let g = k3()
            .with_rotation(vec![vec![1, 2], vec![2, 0], vec![0, 1]])
            .unwrap();
        let faces = trace_faces(&g).unwrap();
        assert_eq!(faces.len(), 2);
        assert!(faces.faces().iter().all(|c| c.len() == 3));
    }

    #[test]
    fn k4_tetrahedron_has_four_triangles() {
        let faces = trace_faces(&k4_embedded()).unwrap();
        assert_eq!(faces.len(), 4);
        assert!(faces.faces().iter().all(|c| c.len() == 3));
        for outer in 0..4 {
            assert!(is_triangulation(&k4_embedded(), &faces, outer).unwrap());
        }
    }

    #[test]
    fn scrambled_k4_rotation_fails_euler() {
        // Swapping two neighbors at vertex 0 yields a non-planar embedding
        // (genus 1), which the Euler check rejects.
        let g = PlanarGraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
            .unwrap()
            .with_rotation(vec![
                vec![3, 1, 2],
                vec![2, 3, 0],
                vec![0, 3, 1],
                vec![0, 1, 2],
            ])
            .unwrap();
        assert!(matches!(
            trace_faces(&g),
            Err(GraphError::EulerCheck { .. })
        ));
    }

    #[test]
    fn face_lengths_sum_to_twice_edges() {
        let g = k4_embedded();
        let faces = trace_faces(&g).unwrap();
        let total: usize = faces.faces().iter().map(|c| c.len()).sum();
        assert_eq!(total, 2 * g.edge_count());
    }

    #[test]
    fn c4_is_not_a_triangulation() {
        let g = PlanarGraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)])
            .unwrap()
            .with_rotation(vec![vec![1, 3], vec![2, 0], vec![3, 1], vec![0, 2]])
            .unwrap();
        let faces = trace_faces(&g).unwrap();
        assert_eq!(faces.len(), 2);
        assert!(!is_triangulation(&g, &faces, 0).unwrap());
    }

    #[test]
    fn wheel_w6_triangulation_depends_on_outer_face() {
        // Hub 6 joined to a 6-cycle 0..5.
        let mut edges = Vec::new();
        for i in 0..6 {
            edges.push((i, (i + 1) % 6));
            edges.push((i, 6));
        }
        let mut rotation = Vec::new();
        for i in 0..6usize {
            let prev = (i + 5) % 6;
            let next = (i + 1) % 6;
            rotation.push(vec![prev, 6, next]);
        }
        rotation.push(vec![0, 1, 2, 3, 4, 5]);
        let g = PlanarGraph::new(7, edges)
            .unwrap()
            .with_rotation(rotation)
            .unwrap();
        let faces = trace_faces(&g).unwrap();
        assert_eq!(faces.len(), 7);
        let outer = faces
            .faces()
            .iter()
            .position(|c| c.len() == 6)
            .expect("rim face");
        assert!(is_triangulation(&g, &faces, outer).unwrap());
        let tri = faces.faces().iter().position(|c| c.len() == 3).unwrap();
        assert!(!is_triangulation(&g, &faces, tri).unwrap());
    }

    #[test]
    fn face_id_out_of_range_is_an_error() {
        let faces = trace_faces(&k4_embedded()).unwrap();
        assert!(matches!(
            is_triangulation(&k4_embedded(), &faces, 99),
            Err(GraphError::FaceOutOfRange { face: 99, count: 4 })
        ));
    }

    #[test]
    fn ordering_from_ids_round_trips() {
        let ord = VertexOrdering::from_ids(vec![2, 0, 1]).unwrap();
        assert_eq!(ord.rank(2), 0);
        assert_eq!(ord.rank(0), 1);
        assert_eq!(ord.rank(1), 2);
        assert_eq!(ord.order(), &[2, 0, 1]);
        let identity = VertexOrdering::from_ids((0..4).collect()).unwrap();
        assert_eq!(identity.order(), &[0, 1, 2, 3]);
        for v in 0..4 {
            assert_eq!(identity.rank(v), v);
        }
    }

    #[test]
    fn ordering_rejects_repeats() {
        assert!(VertexOrdering::from_ids(vec![0, 0, 1]).is_err());
        assert!(VertexOrdering::from_ids(vec![0, 3]).is_err());
    }
}
