//! Scatterer configurations and the two generator families.
//!
//! A configuration is an ordered list of point scatterers, each carrying a
//! position `z_j ∈ ℝ³` and a strength parameter `α_j` (units 1/length).
//! Positions must be pairwise distinct; the contact matrix blows up as two
//! points merge, so a minimum-separation threshold is enforced at
//! construction time.
//!
//! Two closed families are provided:
//! - a regular tetrahedron with `α = -1/(4πs)` at edge length `s`, which
//!   carries a threefold-degenerate zero-energy bound state;
//! - a regular planar 2m-gon with the uniform `α` that makes the
//!   alternating charge vector `q_j = (-1)^{j+1}` a zero-energy bound
//!   state. The segment case `m = 1` is admitted.

// `f64` math (`sin`, `sqrt`, ...) is `std`-only; this libm-backed trait
// supplies it in `no_std` builds, and the inherent methods shadow it when
// a consumer links `std`.
#[allow(unused_imports)]
use num_traits::Float as _;
use alloc::vec::Vec;

use crate::error::{Error, Result};

const FOUR_PI: f64 = 4.0 * core::f64::consts::PI;

/// A point in ℝ³ (dimensionless length units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const ORIGIN: Point3 = Point3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn dot(&self, other: &Point3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Euclidean distance to `other`.
    pub fn dist(&self, other: &Point3) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

/// A single zero-range scatterer: position `z_j` and strength `α_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointScatterer {
    pub position: Point3,
    pub alpha: f64,
}

impl PointScatterer {
    pub const fn new(position: Point3, alpha: f64) -> Self {
        PointScatterer { position, alpha }
    }
}

/// An ordered, validated list of point scatterers.
///
/// Invariants established at construction:
/// - at least one scatterer;
/// - every position component and every `α_j` finite;
/// - pairwise distances strictly above the separation threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    scatterers: Vec<PointScatterer>,
    separation_threshold: f64,
}

impl Configuration {
    /// Default minimum pairwise separation (absolute, in length units).
    pub const DEFAULT_MIN_SEPARATION: f64 = 1e-12;

    /// Validates and wraps `scatterers` using the default separation
    /// threshold.
    pub fn new(scatterers: Vec<PointScatterer>) -> Result<Self> {
        Self::with_min_separation(scatterers, Self::DEFAULT_MIN_SEPARATION)
    }

    /// Validates and wraps `scatterers` with an explicit minimum-separation
    /// threshold.
    pub fn with_min_separation(scatterers: Vec<PointScatterer>, threshold: f64) -> Result<Self> {
        if !(threshold > 0.0) || !threshold.is_finite() {
            return Err(Error::invalid(format_args!(
                "separation threshold must be positive and finite, got {threshold}"
            )));
        }
        if scatterers.is_empty() {
            return Err(Error::invalid("configuration needs at least one scatterer"));
        }
        for (j, s) in scatterers.iter().enumerate() {
            if !s.position.is_finite() {
                return Err(Error::invalid(format_args!(
                    "scatterer {j} has a non-finite position"
                )));
            }
            if !s.alpha.is_finite() {
                return Err(Error::invalid(format_args!(
                    "scatterer {j} has a non-finite alpha"
                )));
            }
        }
        for i in 0..scatterers.len() {
            for j in (i + 1)..scatterers.len() {
                let d = scatterers[i].position.dist(&scatterers[j].position);
                if d <= threshold {
                    return Err(Error::CoincidentScatterers {
                        i,
                        j,
                        distance: d,
                        threshold,
                    });
                }
            }
        }
        Ok(Configuration {
            scatterers,
            separation_threshold: threshold,
        })
    }

    pub fn len(&self) -> usize {
        self.scatterers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scatterers.is_empty()
    }

    pub fn scatterers(&self) -> &[PointScatterer] {
        &self.scatterers
    }

    pub fn position(&self, j: usize) -> Point3 {
        self.scatterers[j].position
    }

    pub fn alpha(&self, j: usize) -> f64 {
        self.scatterers[j].alpha
    }

    /// Threshold below which two points count as coincident. Field
    /// evaluators reuse it as the singularity guard.
    pub fn separation_threshold(&self) -> f64 {
        self.separation_threshold
    }

    /// Smallest pairwise distance; `+∞` for a single scatterer.
    pub fn min_pairwise_distance(&self) -> f64 {
        let mut min = f64::INFINITY;
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                min = min.min(self.scatterers[i].position.dist(&self.scatterers[j].position));
            }
        }
        min
    }

    /// Largest pairwise distance; 0 for a single scatterer.
    pub fn diameter(&self) -> f64 {
        let mut max: f64 = 0.0;
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                max = max.max(self.scatterers[i].position.dist(&self.scatterers[j].position));
            }
        }
        max
    }

    /// Largest distance of any scatterer from the origin.
    pub fn max_radius(&self) -> f64 {
        self.scatterers
            .iter()
            .map(|s| s.position.norm())
            .fold(0.0, f64::max)
    }
}

/// The strictly decreasing positive terms `u_k` of the folded alternating
/// form of the 2m-gon strength parameter:
/// `α = -Σ_{k=2}^{m+1} (-1)^k u_k` with `u_2 > u_3 > … > u_{m+1} > 0`.
///
/// `terms()[i]` holds `u_{i+2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlternatingDistanceTerms {
    u: Vec<f64>,
}

impl AlternatingDistanceTerms {
    pub fn terms(&self) -> &[f64] {
        &self.u
    }

    /// True when the terms satisfy `u_2 > u_3 > … > u_{m+1} > 0`.
    pub fn is_strictly_decreasing_positive(&self) -> bool {
        self.u.iter().all(|&u| u > 0.0) && self.u.windows(2).all(|w| w[0] > w[1])
    }
}

/// Regular tetrahedron with pairwise distance `edge` and every
/// `α_j = -1/(4π·edge)`.
///
/// Vertices are the canonical embedding (1,1,1), (1,-1,-1), (-1,1,-1),
/// (-1,-1,1) rescaled so that every edge has the requested length.
pub fn make_tetrahedron(edge: f64) -> Result<Configuration> {
    if !(edge > 0.0) || !edge.is_finite() {
        return Err(Error::invalid(format_args!(
            "tetrahedron edge must be positive and finite, got {edge}"
        )));
    }
    // Canonical pairwise distance is 2√2.
    let scale = edge / (2.0 * 2.0f64.sqrt());
    let alpha = -1.0 / (FOUR_PI * edge);
    let verts = [
        (1.0, 1.0, 1.0),
        (1.0, -1.0, -1.0),
        (-1.0, 1.0, -1.0),
        (-1.0, -1.0, 1.0),
    ];
    let scatterers = verts
        .iter()
        .map(|&(x, y, z)| PointScatterer::new(Point3::new(x * scale, y * scale, z * scale), alpha))
        .collect();
    Configuration::new(scatterers)
}

/// Vertices of the regular 2m-gon of circumradius `r0` in the z = 0 plane,
/// sequentially enumerated counterclockwise from the +x axis:
/// `z_j = r0 (cos(π(j-1)/m), sin(π(j-1)/m), 0)`, j = 1..2m.
fn polygon_vertices(m: u32, r0: f64) -> Vec<Point3> {
    let n = 2 * m as usize;
    (0..n)
        .map(|j| {
            let angle = core::f64::consts::PI * (j as f64) / (m as f64);
            Point3::new(r0 * angle.cos(), r0 * angle.sin(), 0.0)
        })
        .collect()
}

fn check_polygon_params(m: u32, r0: f64) -> Result<()> {
    if m < 1 {
        return Err(Error::invalid("polygon parameter m must be at least 1"));
    }
    if !(r0 > 0.0) || !r0.is_finite() {
        return Err(Error::invalid(format_args!(
            "polygon circumradius r0 must be positive and finite, got {r0}"
        )));
    }
    Ok(())
}

/// The uniform strength parameter of the 2m-gon, as the alternating sum
/// over the distances from vertex 1:
/// `α = -Σ_{k=2}^{2m} (-1)^k / (4π |z_k - z_1|)`,
/// evaluated from the actual vertex coordinates.
pub fn polygon_alpha(m: u32, r0: f64) -> Result<f64> {
    check_polygon_params(m, r0)?;
    let verts = polygon_vertices(m, r0);
    let z1 = verts[0];
    let mut alpha = 0.0;
    for (k, zk) in verts.iter().enumerate().skip(1) {
        // k is 0-based here; the formula above uses 1-based k + 1.
        let sign = if (k + 1) % 2 == 0 { 1.0 } else { -1.0 };
        alpha -= sign / (FOUR_PI * zk.dist(&z1));
    }
    Ok(alpha)
}

/// Regular planar 2m-gon of circumradius `r0` with the uniform `α` of
/// [`polygon_alpha`]. For `m = 1` the polygon degenerates to a segment of
/// length `2 r0`, which is a valid configuration.
pub fn make_polygon(m: u32, r0: f64) -> Result<Configuration> {
    let alpha = polygon_alpha(m, r0)?;
    let scatterers = polygon_vertices(m, r0)
        .into_iter()
        .map(|p| PointScatterer::new(p, alpha))
        .collect();
    Configuration::new(scatterers)
}

/// The folded alternating form of the 2m-gon strength parameter:
///
/// `α = -Σ_{k=2}^{m+1} (-1)^k u_k`,
/// `u_k = 1/(2π |z_k - z_1|)` for k = 2..m, `u_{m+1} = 1/(4π |z_{m+1} - z_1|)`,
///
/// with chord distances in closed form, `|z_k - z_1| = 2 r0 sin(π(k-1)/(2m))`.
/// The terms decrease strictly, so consecutive partial sums bracket `α` and
/// in particular `α < 0`. Agrees with [`polygon_alpha`] to near machine
/// precision.
pub fn alpha_alternating(m: u32, r0: f64) -> Result<(f64, AlternatingDistanceTerms)> {
    check_polygon_params(m, r0)?;
    let chord = |k: u32| {
        // |z_k - z_1| for 1-based k
        2.0 * r0 * (core::f64::consts::PI * ((k - 1) as f64) / (2.0 * m as f64)).sin()
    };
    let mut u = Vec::with_capacity(m as usize);
    for k in 2..=m {
        u.push(1.0 / (2.0 * core::f64::consts::PI * chord(k)));
    }
    u.push(1.0 / (FOUR_PI * chord(m + 1)));
    let mut alpha = 0.0;
    for (i, &uk) in u.iter().enumerate() {
        // 1-based index k = i + 2
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        alpha -= sign * uk;
    }
    Ok((alpha, AlternatingDistanceTerms { u }))
}
