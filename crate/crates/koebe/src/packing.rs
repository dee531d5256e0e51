//! Numerical coin models of planar triangulations.
//!
//! `solve_radii` runs the classical radius iteration: sweep the interior
//! vertices, replacing each radius by the one that makes its angle sum
//! exactly `2π` under a uniform-neighbor surrogate. `layout` then places
//! centers by completing tangent triangles face by face and polishes the
//! result with a few local relaxation sweeps. Boundary vertices (the outer
//! face) carry prescribed radii.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::geometry::{CoinModel, Disc, Point};
use crate::graph::{trace_faces, FaceSet, GraphError, PlanarGraph};
use crate::math;

/// Tolerances and iteration limits for the radius solver.
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    /// Target bound on `|θ(v) - 2π|` at interior vertices.
    pub angle_tolerance: f64,
    /// Maximum number of interior sweeps.
    pub max_iterations: usize,
    /// Multiplicative damping of the radius update, in `(0, 1]`.
    pub damping: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            angle_tolerance: 1e-10,
            max_iterations: 100_000,
            damping: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PackingError {
    Graph(GraphError),
    /// The given outer cycle is not a face of the embedding.
    OuterFaceNotFound,
    NotATriangulation,
    BadBoundaryRadius { vertex: usize, radius: f64 },
    BoundaryLengthMismatch { expected: usize, got: usize },
    /// Radius iteration failed to reach the angle tolerance.
    NotConverged { iterations: usize, defect: f64 },
    /// Face traversal failed to place every vertex.
    LayoutInconsistent,
    /// Residual tangency error above the accepted bound.
    TangencyDefect { defect: f64 },
}

impl fmt::Display for PackingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PackingError::Graph(e) => write!(f, "{e}"),
            PackingError::OuterFaceNotFound => write!(f, "outer cycle is not a face"),
            PackingError::NotATriangulation => write!(f, "interior faces are not all triangles"),
            PackingError::BadBoundaryRadius { vertex, radius } => {
                write!(f, "boundary radius {radius} at vertex {vertex}")
            }
            PackingError::BoundaryLengthMismatch { expected, got } => {
                write!(f, "expected {expected} boundary radii, got {got}")
            }
            PackingError::NotConverged { iterations, defect } => {
                write!(f, "no convergence after {iterations} sweeps (defect {defect:e})")
            }
            PackingError::LayoutInconsistent => write!(f, "face traversal inconsistency"),
            PackingError::TangencyDefect { defect } => {
                write!(f, "tangency defect {defect:e} above bound")
            }
        }
    }
}

impl core::error::Error for PackingError {}

impl From<GraphError> for PackingError {
    fn from(e: GraphError) -> Self {
        PackingError::Graph(e)
    }
}

/// A triangulation with a chosen outer face and prescribed boundary radii.
#[derive(Debug, Clone)]
pub struct PackingProblem {
    graph: PlanarGraph,
    faces: FaceSet,
    outer_face: usize,
    /// Outer cycle starting at the caller's first boundary vertex.
    outer_cycle: Vec<usize>,
    /// `Some(radius)` exactly on boundary vertices.
    boundary: Vec<Option<f64>>,
}

impl PackingProblem {
    /// Builds a problem from an embedded graph, the outer cycle, and one
    /// radius per outer-cycle vertex (in cycle order).
    pub fn new(
        graph: PlanarGraph,
        outer: &[usize],
        boundary_radii: &[f64],
    ) -> Result<Self, PackingError> {
        if boundary_radii.len() != outer.len() {
            return Err(PackingError::BoundaryLengthMismatch {
                expected: outer.len(),
                got: boundary_radii.len(),
            });
        }
        let faces = trace_faces(&graph)?;
        let mut outer_sorted: Vec<usize> = outer.to_vec();
        outer_sorted.sort_unstable();
        let outer_face = faces
            .faces()
            .iter()
            .position(|cycle| {
                if cycle.len() != outer.len() {
                    return false;
                }
                let mut sorted = cycle.clone();
                sorted.sort_unstable();
                sorted == outer_sorted
            })
            .ok_or(PackingError::OuterFaceNotFound)?;
        let triangulated = faces
            .faces()
            .iter()
            .enumerate()
            .all(|(id, cycle)| id == outer_face || cycle.len() == 3);
        if !triangulated {
            return Err(PackingError::NotATriangulation);
        }
        let mut boundary = vec![None; graph.vertex_count()];
        for (&v, &r) in outer.iter().zip(boundary_radii) {
            if !(r > 0.0) || !r.is_finite() {
                return Err(PackingError::BadBoundaryRadius { vertex: v, radius: r });
            }
            boundary[v] = Some(r);
        }
        // Rotate the traced cycle to start at the caller's first vertex.
        let cycle = faces.face(outer_face);
        let start = cycle
            .iter()
            .position(|&v| v == outer[0])
            .expect("outer[0] is on the outer face");
        let outer_cycle = cycle[start..]
            .iter()
            .chain(cycle[..start].iter())
            .copied()
            .collect();
        Ok(PackingProblem {
            graph,
            faces,
            outer_face,
            outer_cycle,
            boundary,
        })
    }

    /// Convenience constructor with all boundary radii equal to one.
    pub fn with_unit_boundary(graph: PlanarGraph, outer: &[usize]) -> Result<Self, PackingError> {
        let radii = vec![1.0; outer.len()];
        PackingProblem::new(graph, outer, &radii)
    }

    pub fn graph(&self) -> &PlanarGraph {
        &self.graph
    }

    pub fn outer_cycle(&self) -> &[usize] {
        &self.outer_cycle
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.boundary[v].is_some()
    }
}

/// Converged packing with residual diagnostics.
#[derive(Debug, Clone)]
pub struct PackingSolution {
    pub radii: Vec<f64>,
    pub centers: Vec<Point>,
    pub max_angle_defect: f64,
    pub max_tangency_defect: f64,
    pub iterations: usize,
}

fn angle_at(rv: f64, ru: f64, rw: f64) -> f64 {
    let a = rv + ru;
    let b = rv + rw;
    let c = ru + rw;
    math::acos((a * a + b * b - c * c) / (2.0 * a * b))
}

fn angle_sum(graph: &PlanarGraph, radii: &[f64], v: usize) -> f64 {
    let rot = &graph.rotation().expect("embedded")[v];
    let k = rot.len();
    let mut theta = 0.0;
    for i in 0..k {
        theta += angle_at(radii[v], radii[rot[i]], radii[rot[(i + 1) % k]]);
    }
    theta
}

/// Solves interior radii so every interior angle sum is `2π` within
/// tolerance. Boundary radii are held fixed.
///
/// Sweeps are accelerated by a guarded geometric extrapolation step when the
/// per-sweep error ratio stabilizes; oscillation halves the damping factor.
pub fn solve_radii(
    problem: &PackingProblem,
    cfg: &SolverConfig,
) -> Result<(Vec<f64>, usize, f64), PackingError> {
    let graph = &problem.graph;
    let n = graph.vertex_count();
    let interior: Vec<usize> = (0..n).filter(|&v| !problem.is_boundary(v)).collect();
    let boundary_mean = {
        let values: Vec<f64> = problem.boundary.iter().flatten().copied().collect();
        values.iter().sum::<f64>() / values.len() as f64
    };
    let mut radii: Vec<f64> = (0..n)
        .map(|v| problem.boundary[v].unwrap_or(boundary_mean))
        .collect();
    if interior.is_empty() {
        return Ok((radii, 0, 0.0));
    }

    let mut damping = cfg.damping.clamp(1e-3, 1.0);
    let mut prev_radii = radii.clone();
    let mut prev_defect = f64::INFINITY;
    let mut prev_ratio = f64::NAN;
    let mut rising_sweeps = 0usize;
    let mut cooldown = 0usize;
    let mut saved: Option<(Vec<f64>, f64)> = None;

    for sweep in 1..=cfg.max_iterations {
        let mut defect = 0.0f64;
        for &v in &interior {
            let theta = angle_sum(graph, &radii, v);
            defect = defect.max(math::abs(theta - math::TAU));
            let k = graph.degree(v) as f64;
            let beta = math::sin(theta / (2.0 * k));
            let delta = math::sin(math::PI / k);
            let uniform = radii[v] * beta / (1.0 - beta);
            let target = uniform * (1.0 - delta) / delta;
            radii[v] = if damping >= 1.0 {
                target
            } else {
                radii[v] * math::powf(target / radii[v], damping)
            };
        }
        if defect <= cfg.angle_tolerance {
            return Ok((radii, sweep, final_defect(graph, &radii, &interior)));
        }

        // Revert a failed extrapolation.
        if let Some((snapshot, snapshot_defect)) = saved.take() {
            if defect > snapshot_defect {
                radii = snapshot;
                prev_defect = snapshot_defect;
                prev_ratio = f64::NAN;
                cooldown = 50;
                continue;
            }
        }

        if defect > prev_defect {
            rising_sweeps += 1;
            if rising_sweeps >= 10 {
                damping = (damping * 0.5).max(1e-3);
                rising_sweeps = 0;
            }
        } else {
            rising_sweeps = 0;
        }

        let ratio = defect / prev_defect;
        if cooldown > 0 {
            cooldown -= 1;
        } else if ratio < 1.0
            && prev_ratio.is_finite()
            && math::abs(ratio - prev_ratio) < 0.02 * ratio
        {
            // Error is shrinking geometrically: extrapolate the fixed point.
            let mu = (ratio / (1.0 - ratio)).min(40.0);
            saved = Some((radii.clone(), defect));
            for &v in &interior {
                let step = radii[v] / prev_radii[v];
                radii[v] *= math::powf(step, mu);
            }
            prev_ratio = f64::NAN;
            cooldown = 2;
        } else {
            prev_ratio = ratio;
        }
        prev_defect = defect;
        prev_radii.copy_from_slice(&radii);
    }
    Err(PackingError::NotConverged {
        iterations: cfg.max_iterations,
        defect: final_defect(graph, &radii, &interior),
    })
}

fn final_defect(graph: &PlanarGraph, radii: &[f64], interior: &[usize]) -> f64 {
    interior
        .iter()
        .map(|&v| math::abs(angle_sum(graph, radii, v) - math::TAU))
        .fold(0.0, f64::max)
}

/// Places centers for converged radii by tangency-circle intersection,
/// traversing faces breadth-first from one boundary edge, then relaxing
/// centers until edge tangency residuals settle.
pub fn layout(
    problem: &PackingProblem,
    radii: &[f64],
    cfg: &SolverConfig,
) -> Result<(Vec<Point>, f64), PackingError> {
    let graph = &problem.graph;
    let n = graph.vertex_count();
    let faces = &problem.faces;

    // Directed edge -> face id.
    let mut face_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (id, cycle) in faces.faces().iter().enumerate() {
        for i in 0..cycle.len() {
            face_of.insert((cycle[i], cycle[(i + 1) % cycle.len()]), id);
        }
    }

    let b0 = problem.outer_cycle[0];
    let b1 = problem.outer_cycle[1];
    let mut centers = vec![Point::ORIGIN; n];
    let mut placed = vec![false; n];
    centers[b0] = Point::ORIGIN;
    centers[b1] = Point::new(radii[b0] + radii[b1], 0.0);
    placed[b0] = true;
    placed[b1] = true;

    let seed = *[(b0, b1), (b1, b0)]
        .iter()
        .filter_map(|key| face_of.get(key))
        .find(|&&id| id != problem.outer_face)
        .ok_or(PackingError::LayoutInconsistent)?;

    let mut queue = VecDeque::new();
    let mut enqueued = vec![false; faces.len()];
    queue.push_back(seed);
    enqueued[seed] = true;
    let mut orientation = 0.0f64;
    let mut placed_count = 2usize;

    while let Some(id) = queue.pop_front() {
        enqueued[id] = false;
        if id == problem.outer_face {
            continue;
        }
        let cycle = faces.face(id);
        let missing: Vec<usize> = (0..3).filter(|&i| !placed[cycle[i]]).collect();
        match missing.len() {
            0 => continue,
            1 => {
                let i = missing[0];
                let w = cycle[i];
                let u = cycle[(i + 1) % 3];
                let v = cycle[(i + 2) % 3];
                // w completes the face-oriented edge (u, v).
                let su = radii[u] + radii[w];
                let sv = radii[v] + radii[w];
                let base = centers[v] - centers[u];
                let length = base.norm();
                if length <= 0.0 {
                    return Err(PackingError::LayoutInconsistent);
                }
                let x = (length * length + su * su - sv * sv) / (2.0 * length);
                let h = math::sqrt((su * su - x * x).max(0.0));
                let unit = base * (1.0 / length);
                let perp = Point::new(-unit.y, unit.x);
                let sign = if orientation == 0.0 {
                    // Reflection convention: first completed vertex gets y > 0.
                    let up = centers[u] + unit * x + perp * h;
                    orientation = if up.y >= 0.0 { 1.0 } else { -1.0 };
                    orientation
                } else {
                    orientation
                };
                centers[w] = centers[u] + unit * x + perp * (sign * h);
                placed[w] = true;
                placed_count += 1;
                for nb_face in [(u, w), (w, v), (v, u), (w, u), (v, w), (u, v)] {
                    if let Some(&next) = face_of.get(&nb_face) {
                        if !enqueued[next] && next != problem.outer_face {
                            enqueued[next] = true;
                            queue.push_back(next);
                        }
                    }
                }
            }
            _ => {
                // Neighbor faces may still complete it later; requeue lazily
                // by pushing its twins once more when neighbors get placed.
                continue;
            }
        }
    }
    if placed_count != n {
        return Err(PackingError::LayoutInconsistent);
    }

    // Local relaxation: move each center toward the average of the tangency
    // points its placed neighbors imply. The two frame vertices stay pinned.
    let scale = radii.iter().sum::<f64>() / n as f64;
    let bound = 10.0 * cfg.angle_tolerance * scale.max(f64::MIN_POSITIVE);
    let mut defect = tangency_defect(graph, radii, &centers);
    let mut sweeps = 0;
    while defect > 0.02 * bound && sweeps < 400 {
        for v in 0..n {
            if v == b0 || v == b1 {
                continue;
            }
            let mut acc = Point::ORIGIN;
            let mut count = 0.0;
            for &u in graph.neighbors(v) {
                let dir = centers[v] - centers[u];
                let len = dir.norm();
                if len <= 0.0 {
                    continue;
                }
                let target = centers[u] + dir * ((radii[u] + radii[v]) / len);
                acc = acc + target;
                count += 1.0;
            }
            if count > 0.0 {
                centers[v] = acc * (1.0 / count);
            }
        }
        sweeps += 1;
        let new_defect = tangency_defect(graph, radii, &centers);
        if new_defect >= defect * 0.999999 {
            defect = new_defect;
            break;
        }
        defect = new_defect;
    }

    if defect > bound {
        return Err(PackingError::TangencyDefect { defect });
    }
    Ok((centers, defect))
}

fn tangency_defect(graph: &PlanarGraph, radii: &[f64], centers: &[Point]) -> f64 {
    graph
        .edges()
        .iter()
        .map(|&(u, v)| math::abs(centers[u].distance(centers[v]) - (radii[u] + radii[v])))
        .fold(0.0, f64::max)
}

/// Solves radii and layout, returning the coin model with diagnostics.
pub fn pack(
    problem: &PackingProblem,
    cfg: &SolverConfig,
) -> Result<(CoinModel, PackingSolution), PackingError> {
    let (radii, iterations, angle_defect) = solve_radii(problem, cfg)?;
    let (centers, tangency) = layout(problem, &radii, cfg)?;
    let discs = radii
        .iter()
        .zip(&centers)
        .map(|(&r, &c)| Disc::new(c, r).expect("positive radius"))
        .collect();
    Ok((
        CoinModel::new(discs),
        PackingSolution {
            radii,
            centers,
            max_angle_defect: angle_defect,
            max_tangency_defect: tangency,
            iterations,
        },
    ))
}
