//! The density-weighted plane measure and its lower-bound calculus.
//!
//! The measure `μ` has density `1/‖x‖²` away from the origin. Rings have the
//! closed form `μ = 2π ln(b/a)`; discs that avoid the origin are integrated
//! by adaptive quadrature in polar coordinates (the radial part is exact,
//! the angular part adaptively refined). The chain machinery bounds the
//! measure of a tangent disc chain from below and feeds the admissibility
//! area certificates.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::adm::{validate_family, FamilyViolation};
use crate::geometry::{inner_tangent_disc, CoinModel, Disc, GeometryError, Point};
use crate::graph::{PlanarGraph, VertexOrdering};
use crate::math;

#[derive(Debug, Clone, PartialEq)]
pub enum MeasureError {
    DensityAtOrigin,
    /// Ring bounds must satisfy `0 < a <= b`.
    BadRing { a: f64, b: f64 },
    /// The disc contains the origin, where the density is not integrable.
    OriginInDisc { center_distance: f64, radius: f64 },
    /// Sequence entries must lie in `[0, 1]` and end with exactly 1.
    BadRhoSequence,
    PathInvalid(FamilyViolation),
    /// The model is not normalized at the path origin.
    NotNormalized,
    Geometry(GeometryError),
}

impl fmt::Display for MeasureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureError::DensityAtOrigin => write!(f, "density undefined at the origin"),
            MeasureError::BadRing { a, b } => write!(f, "invalid ring bounds {a}..{b}"),
            MeasureError::OriginInDisc {
                center_distance,
                radius,
            } => write!(f, "origin inside disc (a={center_distance}, r={radius})"),
            MeasureError::BadRhoSequence => write!(f, "invalid radius sequence"),
            MeasureError::PathInvalid(v) => write!(f, "invalid path: {v}"),
            MeasureError::NotNormalized => write!(f, "model not normalized at the path origin"),
            MeasureError::Geometry(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for MeasureError {}

impl From<GeometryError> for MeasureError {
    fn from(e: GeometryError) -> Self {
        MeasureError::Geometry(e)
    }
}

/// Density `1/‖x‖²`; undefined at the origin.
pub fn density(x: Point) -> Result<f64, MeasureError> {
    let nn = x.x * x.x + x.y * x.y;
    if nn == 0.0 {
        return Err(MeasureError::DensityAtOrigin);
    }
    Ok(1.0 / nn)
}

/// Measure of the ring `a <= ‖x‖ <= b`, closed form `2π ln(b/a)`.
pub fn mu_ring(a: f64, b: f64) -> Result<f64, MeasureError> {
    if !(a > 0.0) || b < a {
        return Err(MeasureError::BadRing { a, b });
    }
    Ok(math::TAU * math::ln(b / a))
}

/// Adaptive Simpson integration with an absolute error target.
fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
        h / 6.0 * (fa + 4.0 * fm + fb)
    }
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let delta = left + right - whole;
        if depth == 0 || math::abs(delta) <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson(fa, fm, fb, b - a);
    recurse(f, a, b, fa, fm, fb, whole, tol, 48)
}

/// Ring measure by numeric quadrature of the radial profile; the dual route
/// to [`mu_ring`].
pub fn mu_ring_quadrature(a: f64, b: f64, tol: f64) -> Result<f64, MeasureError> {
    if !(a > 0.0) || b < a {
        return Err(MeasureError::BadRing { a, b });
    }
    Ok(adaptive_simpson(&|t: f64| math::TAU / t, a, b, tol))
}

/// Measure of a disc that avoids the origin, by adaptive polar quadrature.
///
/// In polar coordinates around the origin the radial integral over a chord
/// is `ln(r₊/r₋)` exactly; the remaining angular integral is evaluated
/// adaptively to absolute error `tol`.
pub fn mu_disc(disc: Disc, tol: f64) -> Result<f64, MeasureError> {
    let a = disc.center.norm();
    let rho = disc.radius;
    if a <= rho {
        return Err(MeasureError::OriginInDisc {
            center_distance: a,
            radius: rho,
        });
    }
    let half_width = math::asin(rho / a);
    let chord_log = move |t: f64| -> f64 {
        let s2 = rho * rho - a * a * math::sin(t) * math::sin(t);
        let s = math::sqrt(s2.max(0.0));
        let near = a * math::cos(t) - s;
        let far = a * math::cos(t) + s;
        if near <= 0.0 {
            return 0.0;
        }
        math::ln(far / near)
    };
    // The integrand is even in the angle measured from the center direction.
    Ok(2.0 * adaptive_simpson(&chord_log, 0.0, half_width, 0.5 * tol))
}

/// Lower bound `(π/4)·ρ²/a²` for the measure of a disc of radius `rho` whose
/// center sits at distance `a` from the origin (origin outside).
pub fn disc_measure_floor(rho: f64, a: f64) -> Result<f64, MeasureError> {
    if !(rho > 0.0) || rho >= a {
        return Err(MeasureError::OriginInDisc {
            center_distance: a,
            radius: rho,
        });
    }
    Ok(math::PI / 4.0 * (rho * rho) / (a * a))
}

/// Radii `ρ_1..ρ_{ℓ+1}` of a tangent chain, each in `[0,1]`, last exactly 1.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoSequence {
    rhos: Vec<f64>,
}

impl RhoSequence {
    pub fn new(rhos: Vec<f64>) -> Result<Self, MeasureError> {
        if rhos.is_empty()
            || rhos.iter().any(|&r| !(0.0..=1.0).contains(&r))
            || *rhos.last().unwrap() != 1.0
        {
            return Err(MeasureError::BadRhoSequence);
        }
        Ok(RhoSequence { rhos })
    }

    /// Number of chain links before the final unit disc.
    pub fn ell(&self) -> usize {
        self.rhos.len() - 1
    }

    pub fn rhos(&self) -> &[f64] {
        &self.rhos
    }

    /// Nondecreasing prefix sums `x_i = ρ_1 + … + ρ_i`.
    pub fn prefix_sums(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.rhos
            .iter()
            .map(|&r| {
                acc += r;
                acc
            })
            .collect()
    }
}

/// `Σ ρ_i² / (1 + x_i)²` over the chain.
pub fn chain_sum(seq: &RhoSequence) -> f64 {
    chain_sum_raw(seq.rhos())
}

fn chain_sum_raw(rhos: &[f64]) -> f64 {
    let mut x = 0.0;
    let mut total = 0.0;
    for &r in rhos {
        x += r;
        let denom = 1.0 + x;
        total += r * r / (denom * denom);
    }
    total
}

/// Proven floor `min(ℓ^{-2/3}, ln²ℓ / (36(ℓ+1)))` for the chain sum.
pub fn chain_floor(ell: usize) -> f64 {
    let l = ell as f64;
    let a = math::powf(l, -2.0 / 3.0);
    let log = math::ln(l);
    let b = log * log / (36.0 * (l + 1.0));
    a.min(b)
}

/// Configuration of the chain-sum minimizer.
#[derive(Debug, Clone, Copy)]
pub struct ChainMinimizeConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for ChainMinimizeConfig {
    fn default() -> Self {
        ChainMinimizeConfig {
            restarts: 20,
            max_iterations: 400,
            seed: 0,
        }
    }
}

/// Best-found minimum of the chain sum over `ρ_1..ρ_ℓ ∈ [0,1]` (the final
/// entry is pinned to 1).
#[derive(Debug, Clone)]
pub struct ChainMinimum {
    pub value: f64,
    pub argmin: RhoSequence,
    /// The proven floor for this `ℓ`; `value` can never be below it.
    pub floor: f64,
}

fn chain_gradient(rhos: &[f64], grad: &mut [f64]) {
    // d/dρ_j = 2ρ_j/(1+x_j)² - 2 Σ_{i>=j} ρ_i²/(1+x_i)³
    let k = rhos.len();
    let mut x = 0.0;
    let mut prefix = vec![0.0; k];
    for (i, &r) in rhos.iter().enumerate() {
        x += r;
        prefix[i] = x;
    }
    let mut suffix = 0.0;
    for j in (0..k).rev() {
        let denom = 1.0 + prefix[j];
        suffix += rhos[j] * rhos[j] / (denom * denom * denom);
        if j < grad.len() {
            grad[j] = 2.0 * rhos[j] / (denom * denom) - 2.0 * suffix;
        }
    }
}

/// Projected gradient descent with seeded random restarts.
///
/// The returned value is an upper bound on the true minimum; it always sits
/// on or above [`chain_floor`].
pub fn chain_minimize(ell: usize, cfg: &ChainMinimizeConfig) -> ChainMinimum {
    assert!(ell >= 1, "need at least one free chain link");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best_value = f64::INFINITY;
    let mut best: Vec<f64> = vec![0.0; ell + 1];
    let mut point = vec![0.0f64; ell + 1];
    let mut grad = vec![0.0f64; ell];
    for _ in 0..cfg.restarts {
        for slot in point.iter_mut().take(ell) {
            *slot = rng.gen_range(0.0..1.0);
        }
        point[ell] = 1.0;
        let mut value = chain_sum_raw(&point);
        for _ in 0..cfg.max_iterations {
            chain_gradient(&point, &mut grad);
            let mut step = 0.25;
            let mut improved = false;
            while step > 1e-12 {
                let candidate: Vec<f64> = (0..=ell)
                    .map(|j| {
                        if j == ell {
                            1.0
                        } else {
                            (point[j] - step * grad[j]).clamp(0.0, 1.0)
                        }
                    })
                    .collect();
                let cand_value = chain_sum_raw(&candidate);
                if cand_value < value - 1e-15 {
                    point = candidate;
                    value = cand_value;
                    improved = true;
                    break;
                }
                step *= 0.5;
            }
            if !improved {
                break;
            }
        }
        if value < best_value {
            best_value = value;
            best.copy_from_slice(&point);
        }
    }
    let floor = chain_floor(ell);
    debug_assert!(best_value >= floor - 1e-12);
    ChainMinimum {
        value: best_value,
        argmin: RhoSequence::new(best).expect("projection keeps the box"),
        floor,
    }
}

/// Area certificate for one admissibility witness path.
///
/// The covered region is the union of the internal-vertex discs and the
/// unit-radius disc shrunk into the endpoint disc at its entry tangency
/// point; its measure dominates the chain lower bound.
#[derive(Debug, Clone)]
pub struct RegionCertificate {
    pub path: Vec<usize>,
    /// Chain discs `D_1 .. D_{ℓ+1}` (internal discs, then the shrunk
    /// endpoint disc).
    pub discs: Vec<Disc>,
    pub rhos: Vec<f64>,
    pub center_distances: Vec<f64>,
    /// `(π/16) · Σ ρ_i²/(1+x_i)²`.
    pub chain_lower_bound: f64,
    /// Adaptive-quadrature measure of the region.
    pub mu_numeric: f64,
}

impl RegionCertificate {
    /// Checks `A ⊆ ring(1, 2d+1)` on sampled boundary points of each disc.
    pub fn ring_samples_within(&self, d: usize, samples: usize) -> bool {
        let outer = (2 * d + 1) as f64;
        for disc in &self.discs {
            for k in 0..samples {
                let angle = math::TAU * k as f64 / samples as f64;
                let p = disc.center
                    + Point::new(disc.radius * math::cos(angle), disc.radius * math::sin(angle));
                let r = p.norm();
                if r < 1.0 - 1e-9 || r > outer + 1e-9 {
                    return false;
                }
            }
        }
        true
    }
}

/// Builds the area certificate for a strong reachability path in a model
/// normalized at the path origin.
pub fn region_certificate(
    model: &CoinModel,
    graph: &PlanarGraph,
    ord: &VertexOrdering,
    d: usize,
    path: &[usize],
    quad_tol: f64,
) -> Result<RegionCertificate, MeasureError> {
    let origin_vertex = *path.first().ok_or(MeasureError::NotNormalized)?;
    let base = model.disc(origin_vertex);
    if math::abs(base.radius - 1.0) > 1e-9 || base.center.norm() > 1e-9 {
        return Err(MeasureError::NotNormalized);
    }
    validate_family(graph, ord, d, origin_vertex, &[path.to_vec()], false)
        .map_err(MeasureError::PathInvalid)?;

    let end = *path.last().unwrap();
    let predecessor = path[path.len() - 2];
    let mut discs: Vec<Disc> = path[1..path.len() - 1]
        .iter()
        .map(|&w| model.disc(w))
        .collect();
    // Tangency point between the endpoint disc and its predecessor.
    let dp = model.disc(predecessor);
    let dv = model.disc(end);
    let to_end = dv.center - dp.center;
    let gap = to_end.norm();
    let x = dp.center + to_end * (dp.radius / gap);
    let shrunk = inner_tangent_disc(dv, x, dv.radius.min(1.0))?;
    discs.push(shrunk);

    let rhos: Vec<f64> = discs.iter().map(|disc| disc.radius.min(1.0)).collect();
    let center_distances: Vec<f64> = discs.iter().map(|disc| disc.center.norm()).collect();
    // a_i <= 1 + 2ρ_1 + … + 2ρ_{i-1} + ρ_i holds along any tangent chain.
    let mut two_prefix = 0.0;
    for (i, (&a, &rho)) in center_distances.iter().zip(&rhos).enumerate() {
        let bound = 1.0 + two_prefix + rho;
        debug_assert!(
            a <= bound * (1.0 + 1e-9),
            "chain distance bound violated at link {i}: {a} > {bound}"
        );
        two_prefix += 2.0 * rho;
    }

    let chain_lower_bound = math::PI / 16.0 * chain_sum_raw(&rhos);
    let mut mu_numeric = 0.0;
    for disc in &discs {
        mu_numeric += mu_disc(*disc, quad_tol)?;
    }
    Ok(RegionCertificate {
        path: path.to_vec(),
        discs,
        rhos,
        center_distances,
        chain_lower_bound,
        mu_numeric,
    })
}

/// Monte Carlo estimate of a disc measure: the independent oracle for
/// [`mu_disc`]. Returns `(estimate, standard_error)`.
pub fn mu_disc_monte_carlo(disc: Disc, samples: u64, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let area = math::PI * disc.radius * disc.radius;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut accepted = 0u64;
    while accepted < samples {
        let x = rng.gen_range(-1.0..1.0);
        let y = rng.gen_range(-1.0..1.0);
        if x * x + y * y > 1.0 {
            continue;
        }
        accepted += 1;
        let p = disc.center + Point::new(disc.radius * x, disc.radius * y);
        let g = 1.0 / (p.x * p.x + p.y * p.y);
        sum += g;
        sum_sq += g * g;
    }
    let mean = sum / samples as f64;
    let variance = (sum_sq / samples as f64 - mean * mean).max(0.0);
    let std_error = area * math::sqrt(variance / samples as f64);
    (area * mean, std_error)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_examples() {
        assert_eq!(density(Point::new(1.0, 0.0)).unwrap(), 1.0);
        assert!((density(Point::new(3.0, 4.0)).unwrap() - 1.0 / 25.0).abs() < 1e-15);
        assert!(density(Point::ORIGIN).is_err());
    }

    #[test]
    fn ring_closed_form() {
        let r = mu_ring(1.0, 3.0).unwrap();
        assert!((r - math::TAU * math::ln(3.0)).abs() < 1e-12);
        assert_eq!(mu_ring(2.0, 2.0).unwrap(), 0.0);
        assert!((mu_ring(1.0, core::f64::consts::E).unwrap() - math::TAU).abs() < 1e-12);
        assert!(mu_ring(0.0, 1.0).is_err());
        assert!(mu_ring(3.0, 1.0).is_err());
    }

    #[test]
    fn ring_additivity_is_exact() {
        let ab = mu_ring(0.7, 2.2).unwrap();
        let bc = mu_ring(2.2, 9.4).unwrap();
        let ac = mu_ring(0.7, 9.4).unwrap();
        assert!((ab + bc - ac).abs() < 1e-12);
    }

    #[test]
    fn ring_quadrature_matches_closed_form() {
        for (a, b) in [(1.0, 3.0), (0.5, 0.9), (2.0, 50.0)] {
            let exact = mu_ring(a, b).unwrap();
            let quad = mu_ring_quadrature(a, b, 1e-10).unwrap();
            assert!((exact - quad).abs() < 1e-9, "{a}..{b}: {exact} vs {quad}");
        }
    }

    #[test]
    fn disc_measure_on_the_reference_disc() {
        // Unit disc at distance 2: the floor π/16 must hold, and the
        // quadrature agrees with the closed form π ln(a²/(a²-ρ²)).
        let disc = Disc::new(Point::new(2.0, 0.0), 1.0).unwrap();
        let mu = mu_disc(disc, 1e-10).unwrap();
        assert!(mu >= math::PI / 16.0);
        let closed = math::PI * math::ln(4.0 / 3.0);
        assert!((mu - closed).abs() < 1e-9, "{mu} vs {closed}");
    }

    #[test]
    fn tiny_far_disc_behaves_like_constant_density() {
        let disc = Disc::new(Point::new(100.0, 0.0), 0.01).unwrap();
        let mu = mu_disc(disc, 1e-14).unwrap();
        let flat = math::PI * 0.01 * 0.01 / (100.0 * 100.0);
        assert!((mu - flat).abs() < 0.01 * flat);
    }

    #[test]
    fn disc_measure_dominates_floor_on_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let a = rng.gen_range(0.2..50.0);
            let rho = rng.gen_range(0.01..1.0) * a * 0.98;
            let angle = rng.gen_range(0.0..math::TAU);
            let disc = Disc::new(
                Point::new(a * math::cos(angle), a * math::sin(angle)),
                rho,
            )
            .unwrap();
            let mu = mu_disc(disc, 1e-10).unwrap();
            let floor = disc_measure_floor(rho, a).unwrap();
            assert!(mu >= floor - 1e-9, "mu {mu} < floor {floor}");
        }
    }

    #[test]
    fn disc_measure_is_scale_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let a = rng.gen_range(1.0..10.0);
            let rho = rng.gen_range(0.1..0.9) * a;
            let disc = Disc::new(Point::new(a, 0.0), rho).unwrap();
            let s = rng.gen_range(0.1..20.0);
            let scaled = Disc::new(Point::new(a * s, 0.0), rho * s).unwrap();
            let m1 = mu_disc(disc, 1e-10).unwrap();
            let m2 = mu_disc(scaled, 1e-10).unwrap();
            assert!((m1 - m2).abs() < 1e-8, "{m1} vs {m2}");
        }
    }

    #[test]
    fn floor_rejects_origin_in_disc() {
        assert!(disc_measure_floor(2.0, 1.0).is_err());
        assert!(mu_disc(Disc::new(Point::new(1.0, 0.0), 1.5).unwrap(), 1e-9).is_err());
    }

    #[test]
    fn chain_sum_examples() {
        let single = RhoSequence::new(vec![1.0]).unwrap();
        assert!((chain_sum(&single) - 0.25).abs() < 1e-15);
        let double = RhoSequence::new(vec![1.0, 1.0]).unwrap();
        assert!((chain_sum(&double) - (0.25 + 1.0 / 9.0)).abs() < 1e-15);
        let padded = RhoSequence::new(vec![0.0, 0.0, 1.0]).unwrap();
        assert!((chain_sum(&padded) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn rho_sequence_invariants() {
        assert!(RhoSequence::new(vec![]).is_err());
        assert!(RhoSequence::new(vec![0.5]).is_err());
        assert!(RhoSequence::new(vec![1.5, 1.0]).is_err());
        let seq = RhoSequence::new(vec![0.25, 0.5, 1.0]).unwrap();
        assert_eq!(seq.ell(), 2);
        let sums = seq.prefix_sums();
        assert!(sums.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn minimizer_stays_above_floor_and_improves_with_length() {
        let cfg = ChainMinimizeConfig::default();
        let m8 = chain_minimize(8, &cfg);
        assert!(m8.value >= m8.floor);
        let m1024 = chain_minimize(1024, &cfg);
        assert!(m1024.value >= m1024.floor);
        assert!(m1024.value < m8.value);
    }
}
