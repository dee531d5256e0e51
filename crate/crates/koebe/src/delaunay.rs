//! Random Delaunay triangulations used as the packing test corpus.
//!
//! Plain Bowyer-Watson over seeded uniform points. The output carries a
//! rotation system (angular neighbor order) and the hull as outer face, so
//! it plugs directly into the packing solver. Generation validates its own
//! output and retries with fresh jitter on the rare degenerate point set.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::Point;
use crate::graph::{trace_faces, PlanarGraph};
use crate::math;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DelaunayError {
    TooFewPoints(usize),
    /// The point set produced an inconsistent triangulation.
    Degenerate,
}

impl fmt::Display for DelaunayError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DelaunayError::TooFewPoints(n) => write!(f, "need at least 3 points, got {n}"),
            DelaunayError::Degenerate => write!(f, "degenerate point set"),
        }
    }
}

impl core::error::Error for DelaunayError {}

/// A triangulated point set with embedding data.
#[derive(Debug, Clone)]
pub struct Triangulation {
    pub graph: PlanarGraph,
    /// Hull cycle in traversal order; this is the outer face.
    pub hull: Vec<usize>,
    pub points: Vec<Point>,
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

fn in_circumcircle(a: Point, b: Point, c: Point, p: Point) -> bool {
    // Standard incircle determinant; assumes (a, b, c) counterclockwise.
    let ax = a.x - p.x;
    let ay = a.y - p.y;
    let bx = b.x - p.x;
    let by = b.y - p.y;
    let cx = c.x - p.x;
    let cy = c.y - p.y;
    let det = (ax * ax + ay * ay) * (bx * cy - cx * by)
        - (bx * bx + by * by) * (ax * cy - cx * ay)
        + (cx * cx + cy * cy) * (ax * by - bx * ay);
    det > 0.0
}

/// Delaunay triangulation of `points` (general position expected).
pub fn delaunay(points: &[Point]) -> Result<Triangulation, DelaunayError> {
    let n = points.len();
    if n < 3 {
        return Err(DelaunayError::TooFewPoints(n));
    }
    let mut min = Point::new(f64::INFINITY, f64::INFINITY);
    let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        min.x = min.x.min(p.x);
        min.y = min.y.min(p.y);
        max.x = max.x.max(p.x);
        max.y = max.y.max(p.y);
    }
    let center = Point::new(0.5 * (min.x + max.x), 0.5 * (min.y + max.y));
    let span = (max.x - min.x).max(max.y - min.y).max(1e-9);
    let big = 64.0 * span;
    let mut pts: Vec<Point> = points.to_vec();
    pts.push(center + Point::new(0.0, big));
    pts.push(center + Point::new(-big, -big));
    pts.push(center + Point::new(big, -big));

    // Alive triangles as CCW index triples.
    let mut tris: Vec<[usize; 3]> = vec![[n, n + 1, n + 2]];
    for i in 0..n {
        let p = pts[i];
        let mut bad = Vec::new();
        for (t, tri) in tris.iter().enumerate() {
            if in_circumcircle(pts[tri[0]], pts[tri[1]], pts[tri[2]], p) {
                bad.push(t);
            }
        }
        if bad.is_empty() {
            return Err(DelaunayError::Degenerate);
        }
        // Cavity boundary = edges used by exactly one bad triangle.
        let mut edge_use: BTreeMap<(usize, usize), (usize, usize, i32)> = BTreeMap::new();
        for &t in &bad {
            let tri = tris[t];
            for k in 0..3 {
                let (u, v) = (tri[k], tri[(k + 1) % 3]);
                let key = (u.min(v), u.max(v));
                edge_use
                    .entry(key)
                    .and_modify(|e| e.2 += 1)
                    .or_insert((u, v, 1));
            }
        }
        let mut keep = Vec::with_capacity(tris.len() - bad.len());
        for (t, tri) in tris.iter().enumerate() {
            if !bad.contains(&t) {
                keep.push(*tri);
            }
        }
        tris = keep;
        for (_, (u, v, uses)) in edge_use {
            if uses != 1 {
                continue;
            }
            // Keep the new triangle counterclockwise.
            if orient(pts[u], pts[v], p) > 0.0 {
                tris.push([u, v, i]);
            } else {
                tris.push([v, u, i]);
            }
        }
    }

    // Drop triangles touching the helper vertices.
    tris.retain(|tri| tri.iter().all(|&v| v < n));
    if tris.is_empty() {
        return Err(DelaunayError::Degenerate);
    }

    let mut edge_set: BTreeMap<(usize, usize), i32> = BTreeMap::new();
    for tri in &tris {
        for k in 0..3 {
            let (u, v) = (tri[k], tri[(k + 1) % 3]);
            *edge_set.entry((u.min(v), u.max(v))).or_insert(0) += 1;
        }
    }
    let edges: Vec<(usize, usize)> = edge_set.keys().copied().collect();

    // Hull = edges on exactly one triangle, chained into a cycle.
    let mut hull_next: BTreeMap<usize, usize> = BTreeMap::new();
    for tri in &tris {
        for k in 0..3 {
            let (u, v) = (tri[k], tri[(k + 1) % 3]);
            let key = (u.min(v), u.max(v));
            if edge_set[&key] == 1 {
                // (u, v) is CCW along its triangle, so the hull arc runs v -> u
                // when seen from outside; chain accordingly.
                hull_next.insert(v, u);
            }
        }
    }
    if hull_next.len() < 3 {
        return Err(DelaunayError::Degenerate);
    }
    let start = *hull_next.keys().next().unwrap();
    let mut hull = vec![start];
    let mut cur = start;
    loop {
        cur = *hull_next.get(&cur).ok_or(DelaunayError::Degenerate)?;
        if cur == start {
            break;
        }
        hull.push(cur);
        if hull.len() > hull_next.len() {
            return Err(DelaunayError::Degenerate);
        }
    }
    if hull.len() != hull_next.len() {
        return Err(DelaunayError::Degenerate);
    }

    // Rotation system: neighbors in counterclockwise angular order.
    let graph = PlanarGraph::new(n, edges).map_err(|_| DelaunayError::Degenerate)?;
    let mut rotation = Vec::with_capacity(n);
    for v in 0..n {
        let mut nbrs: Vec<(f64, usize)> = graph
            .neighbors(v)
            .iter()
            .map(|&w| {
                (
                    math::atan2(pts[w].y - pts[v].y, pts[w].x - pts[v].x),
                    w,
                )
            })
            .collect();
        nbrs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite angles"));
        rotation.push(nbrs.into_iter().map(|(_, w)| w).collect());
    }
    let graph = graph
        .with_rotation(rotation)
        .map_err(|_| DelaunayError::Degenerate)?;

    // Structural audit before handing the result out.
    let faces = trace_faces(&graph).map_err(|_| DelaunayError::Degenerate)?;
    let non_triangles = faces.faces().iter().filter(|c| c.len() != 3).count();
    let expected_non_tri = if hull.len() == 3 { 0 } else { 1 };
    if non_triangles != expected_non_tri {
        return Err(DelaunayError::Degenerate);
    }

    Ok(Triangulation {
        graph,
        hull,
        points: pts[..n].to_vec(),
    })
}

/// Seeded random triangulation on `n` points.
///
/// Deterministic for a fixed `(n, seed)`; degenerate draws are re-jittered
/// internally.
pub fn random_triangulation(n: usize, seed: u64) -> Triangulation {
    assert!(n >= 3, "need at least 3 points");
    for attempt in 0..16u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt.wrapping_mul(0x9e37)));
        let mut points: Vec<Point> = Vec::with_capacity(n);
        'outer: while points.len() < n {
            let p = Point::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
            for q in &points {
                if p.distance(*q) < 1e-5 {
                    continue 'outer;
                }
            }
            points.push(p);
        }
        if let Ok(t) = delaunay(&points) {
            return t;
        }
    }
    unreachable!("16 independent point sets were all degenerate");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::trace_faces;

    #[test]
    fn triangulates_a_square() {
        let pts = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.1),
        ];
        let t = delaunay(&pts).unwrap();
        assert_eq!(t.graph.vertex_count(), 4);
        assert_eq!(t.hull.len(), 4);
        assert_eq!(t.graph.edge_count(), 5);
    }

    #[test]
    fn random_instances_satisfy_euler_and_budget() {
        for (n, seed) in [(10, 1u64), (50, 2), (200, 3)] {
            let t = random_triangulation(n, seed);
            assert_eq!(t.graph.vertex_count(), n);
            assert!(t.graph.edge_count() <= 3 * n - 6);
            let faces = trace_faces(&t.graph).unwrap();
            assert_eq!(
                t.graph.vertex_count() + faces.len(),
                t.graph.edge_count() + 2
            );
            // interior faces are triangles
            let big = faces.faces().iter().filter(|c| c.len() != 3).count();
            assert!(big <= 1);
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let a = random_triangulation(40, 9);
        let b = random_triangulation(40, 9);
        assert_eq!(a.graph.edges(), b.graph.edges());
        assert_eq!(a.hull, b.hull);
    }
}
