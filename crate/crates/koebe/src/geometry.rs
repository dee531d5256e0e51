//! Discs, coin models, model validation, radius orderings, and SVG
//! rendering.
//!
//! A coin model assigns interior-disjoint discs to vertices so that adjacent
//! vertices receive tangent discs. Validation tolerances are interpreted
//! relative to the model's mean radius, so models at any scale validate the
//! same way.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;

use crate::graph::{GraphError, PlanarGraph, VertexOrdering};
use crate::math;

/// A point in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn norm(self) -> f64 {
        math::hypot(self.x, self.y)
    }

    pub fn distance(self, other: Point) -> f64 {
        math::hypot(self.x - other.x, self.y - other.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl core::ops::Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl core::ops::Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl core::ops::Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

/// Closed disc with positive radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disc {
    pub center: Point,
    pub radius: f64,
}

impl Disc {
    pub fn new(center: Point, radius: f64) -> Result<Self, GeometryError> {
        if !(radius > 0.0) || !center.is_finite() || !radius.is_finite() {
            return Err(GeometryError::BadDisc { radius });
        }
        Ok(Disc { center, radius })
    }
}

/// Tolerances used when validating coin models, relative to mean radius.
#[derive(Debug, Clone, Copy)]
pub struct ToleranceConfig {
    /// Allowed interior overlap between any two discs.
    pub overlap: f64,
    /// Allowed tangency residual on edges.
    pub tangent: f64,
    /// Radius gap below which two discs count as equally large.
    pub tie: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            overlap: 1e-8,
            tangent: 1e-8,
            tie: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GeometryError {
    BadDisc { radius: f64 },
    MissingDisc(usize),
    /// Model and graph disagree on the vertex set.
    VertexMismatch { model: usize, graph: usize },
    /// Point expected on the disc boundary is not.
    NotOnBoundary { distance: f64, radius: f64 },
    /// Requested inner radius exceeds the host disc.
    RadiusTooLarge { requested: f64, available: f64 },
    /// Contact graph broke the planar edge budget.
    ContactBudget { n: usize, m: usize },
    Graph(GraphError),
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::BadDisc { radius } => write!(f, "invalid disc (radius {radius})"),
            GeometryError::MissingDisc(v) => write!(f, "vertex {v} has no disc"),
            GeometryError::VertexMismatch { model, graph } => {
                write!(f, "model has {model} discs, graph {graph} vertices")
            }
            GeometryError::NotOnBoundary { distance, radius } => {
                write!(f, "point at distance {distance} not on boundary r={radius}")
            }
            GeometryError::RadiusTooLarge {
                requested,
                available,
            } => write!(f, "radius {requested} exceeds host radius {available}"),
            GeometryError::ContactBudget { n, m } => {
                write!(f, "contact graph has {m} edges on {n} vertices")
            }
            GeometryError::Graph(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for GeometryError {}

impl From<GraphError> for GeometryError {
    fn from(e: GraphError) -> Self {
        GeometryError::Graph(e)
    }
}

/// Vertex-indexed disc collection with validation tolerances.
#[derive(Debug, Clone)]
pub struct CoinModel {
    discs: Vec<Disc>,
    tolerances: ToleranceConfig,
}

impl CoinModel {
    pub fn new(discs: Vec<Disc>) -> Self {
        CoinModel {
            discs,
            tolerances: ToleranceConfig::default(),
        }
    }

    pub fn with_tolerances(mut self, tolerances: ToleranceConfig) -> Self {
        self.tolerances = tolerances;
        self
    }

    pub fn len(&self) -> usize {
        self.discs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.discs.is_empty()
    }

    pub fn disc(&self, v: usize) -> Disc {
        self.discs[v]
    }

    pub fn discs(&self) -> &[Disc] {
        &self.discs
    }

    pub fn tolerances(&self) -> ToleranceConfig {
        self.tolerances
    }

    pub fn mean_radius(&self) -> f64 {
        if self.discs.is_empty() {
            return 1.0;
        }
        self.discs.iter().map(|d| d.radius).sum::<f64>() / self.discs.len() as f64
    }
}

/// A single violated constraint found by [`validate_model`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Violation {
    /// Discs `u`, `v` overlap by `residual` (in mean-radius units).
    Overlap { u: usize, v: usize, residual: f64 },
    /// Edge `u`-`v` misses tangency by `residual` (in mean-radius units).
    Tangency { u: usize, v: usize, residual: f64 },
}

/// Outcome of validating a model against its graph.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub max_overlap_residual: f64,
    pub max_tangency_residual: f64,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks pairwise interior disjointness and per-edge tangency.
///
/// Residuals are measured relative to the mean radius of the model, so the
/// same tolerances apply to models at any scale.
pub fn validate_model(
    graph: &PlanarGraph,
    model: &CoinModel,
) -> Result<ValidationReport, GeometryError> {
    if model.len() != graph.vertex_count() {
        return Err(GeometryError::VertexMismatch {
            model: model.len(),
            graph: graph.vertex_count(),
        });
    }
    let tol = model.tolerances();
    let scale = model.mean_radius();
    let mut violations = Vec::new();
    let mut max_overlap = 0.0f64;
    let mut max_tangency = 0.0f64;
    let n = model.len();
    for u in 0..n {
        for v in (u + 1)..n {
            let du = model.disc(u);
            let dv = model.disc(v);
            let gap = du.center.distance(dv.center) - (du.radius + dv.radius);
            let overlap = (-gap) / scale;
            if overlap > 0.0 {
                max_overlap = max_overlap.max(overlap);
            }
            if overlap > tol.overlap {
                violations.push(Violation::Overlap {
                    u,
                    v,
                    residual: overlap,
                });
            }
        }
    }
    for &(u, v) in graph.edges() {
        let du = model.disc(u);
        let dv = model.disc(v);
        let residual = math::abs(du.center.distance(dv.center) - (du.radius + dv.radius)) / scale;
        max_tangency = max_tangency.max(residual);
        if residual > tol.tangent {
            violations.push(Violation::Tangency { u, v, residual });
        }
    }
    Ok(ValidationReport {
        violations,
        max_overlap_residual: max_overlap,
        max_tangency_residual: max_tangency,
    })
}

/// Graph whose edges are the tangent disc pairs of `model`.
///
/// The result must satisfy the planar edge budget; breaking it signals a
/// geometrically broken model.
pub fn contact_graph(model: &CoinModel, tangent_tol: f64) -> Result<PlanarGraph, GeometryError> {
    let n = model.len();
    let scale = model.mean_radius();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let du = model.disc(u);
            let dv = model.disc(v);
            let residual =
                math::abs(du.center.distance(dv.center) - (du.radius + dv.radius)) / scale;
            if residual <= tangent_tol {
                edges.push((u, v));
            }
        }
    }
    if n >= 3 && edges.len() > 3 * n - 6 {
        return Err(GeometryError::ContactBudget { n, m: edges.len() });
    }
    PlanarGraph::new(n, edges).map_err(Into::into)
}

/// Orders vertices by non-increasing disc radius.
///
/// Radii whose gap is at most `tie` (in mean-radius units) are grouped into
/// one tie class (transitively) and ordered by ascending vertex id. The
/// defining property is that `rank(u) < rank(v)` whenever
/// `r(u) > r(v) + tie`.
pub fn koebe_ordering(model: &CoinModel) -> VertexOrdering {
    let n = model.len();
    let tie = model.tolerances().tie * model.mean_radius();
    let mut by_radius: Vec<usize> = (0..n).collect();
    by_radius.sort_by(|&a, &b| {
        model
            .disc(b)
            .radius
            .partial_cmp(&model.disc(a).radius)
            .expect("finite radii")
            .then_with(|| a.cmp(&b))
    });
    // Group consecutive near-equal radii, then sort each group by id.
    let mut order = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n {
            let prev = model.disc(by_radius[j - 1]).radius;
            let cur = model.disc(by_radius[j]).radius;
            if prev - cur <= tie {
                j += 1;
            } else {
                break;
            }
        }
        let mut group: Vec<usize> = by_radius[i..j].to_vec();
        group.sort_unstable();
        order.extend(group);
        i = j;
    }
    VertexOrdering::from_ids(order).expect("permutation by construction")
}

/// Rescales and translates the model so that `D(u)` becomes the unit disc at
/// the origin. Radius ratios and tangencies are preserved.
pub fn normalize(model: &CoinModel, u: usize) -> Result<CoinModel, GeometryError> {
    if u >= model.len() {
        return Err(GeometryError::MissingDisc(u));
    }
    let base = model.disc(u);
    let s = 1.0 / base.radius;
    let discs = model
        .discs()
        .iter()
        .map(|d| Disc {
            center: (d.center - base.center) * s,
            radius: d.radius * s,
        })
        .collect();
    Ok(CoinModel {
        discs,
        tolerances: model.tolerances(),
    })
}

/// Disc of radius `rho` contained in `disc` and passing through the boundary
/// point `x` (the image of `disc` under the homothety centered at `x`).
pub fn inner_tangent_disc(disc: Disc, x: Point, rho: f64) -> Result<Disc, GeometryError> {
    let dist = disc.center.distance(x);
    if math::abs(dist - disc.radius) > 1e-7 * disc.radius {
        return Err(GeometryError::NotOnBoundary {
            distance: dist,
            radius: disc.radius,
        });
    }
    if rho > disc.radius * (1.0 + 1e-12) {
        return Err(GeometryError::RadiusTooLarge {
            requested: rho,
            available: disc.radius,
        });
    }
    let t = rho / disc.radius;
    let center = x + (disc.center - x) * t;
    Ok(Disc {
        center,
        radius: rho,
    })
}

fn push_f64(out: &mut String, x: f64) {
    // Shortest round-trip float formatting keeps the output deterministic.
    let _ = write!(out, "{x}");
}

/// Renders the model as a standalone SVG document.
///
/// Output is deterministic for a fixed input. With an ordering supplied,
/// fill lightness encodes the radius rank; vertices in `highlight` are drawn
/// in a contrasting stroke.
pub fn render_svg(
    model: &CoinModel,
    ordering: Option<&VertexOrdering>,
    highlight: &[usize],
) -> String {
    let mut min_x = f64::INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for d in model.discs() {
        min_x = min_x.min(d.center.x - d.radius);
        min_y = min_y.min(d.center.y - d.radius);
        max_x = max_x.max(d.center.x + d.radius);
        max_y = max_y.max(d.center.y + d.radius);
    }
    if model.is_empty() {
        min_x = 0.0;
        min_y = 0.0;
        max_x = 1.0;
        max_y = 1.0;
    }
    let pad = 0.02 * (max_x - min_x).max(max_y - min_y).max(1.0);
    let mut svg = String::new();
    let _ = write!(svg, "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"");
    push_f64(&mut svg, min_x - pad);
    svg.push(' ');
    push_f64(&mut svg, min_y - pad);
    svg.push(' ');
    push_f64(&mut svg, max_x - min_x + 2.0 * pad);
    svg.push(' ');
    push_f64(&mut svg, max_y - min_y + 2.0 * pad);
    svg.push_str("\">\n");
    let n = model.len();
    for v in 0..n {
        let d = model.disc(v);
        let shade = match ordering {
            Some(ord) if n > 1 => 30 + (60 * ord.rank(v)) / (n - 1),
            _ => 60,
        };
        let highlighted = highlight.contains(&v);
        let stroke = if highlighted { "#d03030" } else { "#204060" };
        let _ = write!(svg, "  <circle cx=\"");
        push_f64(&mut svg, d.center.x);
        let _ = write!(svg, "\" cy=\"");
        push_f64(&mut svg, d.center.y);
        let _ = write!(svg, "\" r=\"");
        push_f64(&mut svg, d.radius);
        let _ = write!(
            svg,
            "\" fill=\"hsl(210,40%,{shade}%)\" fill-opacity=\"0.55\" stroke=\"{stroke}\" stroke-width=\""
        );
        push_f64(&mut svg, 0.01 * (max_x - min_x).max(1.0));
        svg.push_str("\"/>\n");
    }
    svg.push_str("</svg>\n");
    svg
}
