//! Convex bodies in the plane (and closed-form balls/ellipsoids in higher
//! dimension): support functions, boundary parametrization by the outer normal,
//! curvature, polar duality, volumes and cone-measure densities.
//!
//! Smooth planar bodies are described through their support function
//! `h(θ)`. The boundary point with outer normal `u(θ)` is
//! `x = h u + h' u⊥`, its radius of curvature is `h + h''` and the surface
//! element is `dμ = (h + h'') dθ`, so every boundary integral becomes a smooth
//! periodic integral in `θ`.

pub mod polygon;

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::{pairwise_sum, periodic_trapezoid};
use crate::roots::{golden_max, safe_newton_increasing};
use crate::vec2::Vec2;

/// Boundary grid used when an operation does not take an explicit size.
pub const DEFAULT_BOUNDARY_GRID: usize = 4096;

/// Unit vector in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Direction(Vec2);

impl Direction {
    /// Fails unless `|v| = 1` within `1e-12`.
    pub fn new(v: Vec2) -> Result<Self> {
        let n = v.norm();
        if !n.is_finite() || (n - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "direction ({}, {}) has norm {n}, expected 1",
                v.x, v.y
            )));
        }
        Ok(Self(v))
    }

    pub fn from_angle(theta: f64) -> Self {
        Self(Vec2::polar(theta))
    }

    pub fn angle(&self) -> f64 {
        self.0.angle()
    }

    pub fn vec(&self) -> Vec2 {
        self.0
    }
}

/// Geometric description of a body.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Ball { radius: f64 },
    /// Axis-parallel ellipsoid; `rotation` (radians) is only used in the plane.
    Ellipsoid { semiaxes: Vec<f64>, rotation: f64 },
    /// Counterclockwise, strictly convex, origin strictly inside.
    Polygon { vertices: Vec<Vec2> },
    /// `h(θ) = c0 + Σ_k cos[k-1]·cos kθ + sin[k-1]·sin kθ`.
    Trig { c0: f64, cos: Vec<f64>, sin: Vec<f64> },
    /// Polar body of a smooth planar body with no closed-form polar.
    Polar(Box<ConvexBody>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexBody {
    dim: usize,
    shape: Shape,
}

/// A point of ∂K together with the first and second order data at it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryPoint {
    pub x: Vec2,
    /// Outer unit normal N_K(x).
    pub normal: Vec2,
    /// ⟨x, N_K(x)⟩ = h_K(N_K(x)).
    pub support: f64,
    /// Gauss curvature κ_K(x).
    pub curvature: f64,
    /// y(x) ∈ ∂K° with ⟨x, y⟩ = 1.
    pub polar_contact: Vec2,
}

/// Boundary node with its surface-measure quadrature weight.
#[derive(Debug, Clone, Copy)]
pub struct BoundarySample {
    /// Parameter of the node (outer normal angle; for polar bodies the normal
    /// angle of the dual body).
    pub param: f64,
    pub point: BoundaryPoint,
    pub weight: f64,
}

/// Densities of the cone measures of K° and K with respect to μ_K.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConeDensities {
    pub p: f64,
    pub q: f64,
}

/// `h, h', h''` at one normal angle.
#[derive(Debug, Clone, Copy)]
pub struct SupportJet {
    pub h: f64,
    pub dh: f64,
    pub d2h: f64,
}

impl SupportJet {
    pub fn radius_of_curvature(&self) -> f64 {
        self.h + self.d2h
    }

    pub fn boundary_point(&self, theta: f64) -> BoundaryPoint {
        let u = Vec2::polar(theta);
        BoundaryPoint {
            x: u * self.h + u.perp() * self.dh,
            normal: u,
            support: self.h,
            curvature: 1.0 / self.radius_of_curvature(),
            polar_contact: u * (1.0 / self.h),
        }
    }
}

/// Volume of the Euclidean unit ball in `R^n`.
pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * PI / n as f64 * unit_ball_volume(n - 2),
    }
}

/// Surface area ω(S^{n-1}) of the unit sphere.
pub fn sphere_area(n: usize) -> f64 {
    n as f64 * unit_ball_volume(n)
}

impl ConvexBody {
    pub fn ball(radius: f64) -> Result<Self> {
        Self::ball_nd(radius, 2)
    }

    pub fn ball_nd(radius: f64, dim: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidInput(format!("ball radius must be positive, got {radius}")));
        }
        if dim < 2 {
            return Err(Error::InvalidInput(format!("dimension must be at least 2, got {dim}")));
        }
        Ok(Self {
            dim,
            shape: Shape::Ball { radius },
        })
    }

    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        Self::ellipse_rotated(a, b, 0.0)
    }

    pub fn ellipse_rotated(a: f64, b: f64, rotation: f64) -> Result<Self> {
        let mut e = Self::ellipsoid(vec![a, b])?;
        if let Shape::Ellipsoid { rotation: r, .. } = &mut e.shape {
            *r = rotation;
        }
        Ok(e)
    }

    pub fn ellipsoid(semiaxes: Vec<f64>) -> Result<Self> {
        if semiaxes.len() < 2 {
            return Err(Error::InvalidInput("ellipsoid needs at least two semiaxes".into()));
        }
        if semiaxes.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
            return Err(Error::InvalidInput(format!(
                "ellipsoid semiaxes must be positive, got {semiaxes:?}"
            )));
        }
        Ok(Self {
            dim: semiaxes.len(),
            shape: Shape::Ellipsoid {
                semiaxes,
                rotation: 0.0,
            },
        })
    }

    pub fn polygon(vertices: Vec<Vec2>) -> Result<Self> {
        polygon::validate(&vertices)?;
        Ok(Self {
            dim: 2,
            shape: Shape::Polygon { vertices },
        })
    }

    /// The square `B^2_∞ = [-1, 1]^2`.
    pub fn square() -> Self {
        Self::polygon(vec![
            Vec2::new(1.0, -1.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(-1.0, 1.0),
            Vec2::new(-1.0, -1.0),
        ])
        .expect("square is a valid polygon")
    }

    /// Body with trigonometric support function. Requires `h > 0` and
    /// `h + h'' > 0` on a dense grid.
    pub fn trig(c0: f64, cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        let body = Self {
            dim: 2,
            shape: Shape::Trig { c0, cos, sin },
        };
        let grid = DEFAULT_BOUNDARY_GRID;
        for j in 0..grid {
            let theta = 2.0 * PI * j as f64 / grid as f64;
            let jet = body.jet(theta).expect("trig jet");
            if !(jet.h > 0.0) {
                return Err(Error::Domain(format!(
                    "support function not positive at theta = {theta}: origin not interior"
                )));
            }
            if !(jet.radius_of_curvature() > 0.0) {
                return Err(Error::Domain(format!(
                    "h + h'' = {} <= 0 at theta = {theta}: not a C2+ convex body",
                    jet.radius_of_curvature()
                )));
            }
        }
        Ok(body)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn variant_name(&self) -> &'static str {
        match self.shape {
            Shape::Ball { .. } => "ball",
            Shape::Ellipsoid { .. } => "ellipsoid",
            Shape::Polygon { .. } => "polygon",
            Shape::Trig { .. } => "trig",
            Shape::Polar(_) => "polar",
        }
    }

    /// C²₊ flag: everything except polygons.
    pub fn is_smooth(&self) -> bool {
        !matches!(self.shape, Shape::Polygon { .. })
    }

    fn require_planar(&self, op: &'static str) -> Result<()> {
        if self.dim != 2 {
            return Err(Error::Unsupported {
                op,
                variant: if self.dim == 3 { "3-dimensional" } else { "higher-dimensional" },
            });
        }
        Ok(())
    }

    fn require_smooth(&self, op: &'static str) -> Result<()> {
        self.require_planar(op)?;
        if !self.is_smooth() {
            return Err(Error::Unsupported {
                op,
                variant: self.variant_name(),
            });
        }
        Ok(())
    }

    /// Support function, curvature-ready: `(h, h', h'')` at normal angle `theta`.
    /// Available for balls, ellipses and trigonometric bodies.
    pub fn jet(&self, theta: f64) -> Option<SupportJet> {
        match &self.shape {
            Shape::Ball { radius } => Some(SupportJet {
                h: *radius,
                dh: 0.0,
                d2h: 0.0,
            }),
            Shape::Ellipsoid { semiaxes, rotation } if semiaxes.len() == 2 => {
                let (a2, b2) = (semiaxes[0] * semiaxes[0], semiaxes[1] * semiaxes[1]);
                let psi = theta - rotation;
                let (s2, c2) = (2.0 * psi).sin_cos();
                let s = 0.5 * (a2 + b2) + 0.5 * (a2 - b2) * c2;
                let h = s.sqrt();
                let ds = -(a2 - b2) * s2;
                let d2s = -2.0 * (a2 - b2) * c2;
                let dh = ds / (2.0 * h);
                let d2h = (0.5 * d2s - dh * dh) / h;
                Some(SupportJet { h, dh, d2h })
            }
            Shape::Trig { c0, cos, sin } => {
                let mut h = *c0;
                let mut dh = 0.0;
                let mut d2h = 0.0;
                let len = cos.len().max(sin.len());
                for i in 0..len {
                    let k = (i + 1) as f64;
                    let c = cos.get(i).copied().unwrap_or(0.0);
                    let s = sin.get(i).copied().unwrap_or(0.0);
                    let (sk, ck) = (k * theta).sin_cos();
                    h += c * ck + s * sk;
                    dh += k * (-c * sk + s * ck);
                    d2h -= k * k * (c * ck + s * sk);
                }
                Some(SupportJet { h, dh, d2h })
            }
            _ => None,
        }
    }

    /// Support function `h_K(u)`.
    pub fn support(&self, u: &Direction) -> Result<f64> {
        self.require_planar("support")?;
        Ok(self.support_angle(u.angle()))
    }

    /// Support function in arbitrary dimension, for balls and ellipsoids.
    pub fn support_nd(&self, u: &[f64]) -> Result<f64> {
        if u.len() != self.dim {
            return Err(Error::InvalidInput(format!(
                "direction has {} components, body has dimension {}",
                u.len(),
                self.dim
            )));
        }
        let norm = u.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("direction has norm {norm}, expected 1")));
        }
        match &self.shape {
            Shape::Ball { radius } => Ok(*radius),
            Shape::Ellipsoid { semiaxes, rotation } if self.dim > 2 || *rotation == 0.0 => Ok(semiaxes
                .iter()
                .zip(u)
                .map(|(a, c)| a * a * c * c)
                .sum::<f64>()
                .sqrt()),
            _ => self.support(&Direction::new(Vec2::new(u[0], u[1]))?),
        }
    }

    /// Support function at normal angle `theta` (planar bodies).
    pub fn support_angle(&self, theta: f64) -> f64 {
        match &self.shape {
            Shape::Polygon { vertices } => {
                let u = Vec2::polar(theta);
                vertices
                    .iter()
                    .map(|v| v.dot(u))
                    .fold(f64::NEG_INFINITY, f64::max)
            }
            Shape::Polar(inner) => 1.0 / inner.radial(theta),
            _ => self.jet(theta).expect("smooth planar body").h,
        }
    }

    /// Radial function `ρ_K(φ) = max{s : s u(φ) ∈ K}`.
    pub fn radial(&self, phi: f64) -> f64 {
        match &self.shape {
            Shape::Ball { radius } => *radius,
            Shape::Ellipsoid { semiaxes, rotation } => {
                let psi = phi - rotation;
                let (s, c) = psi.sin_cos();
                1.0 / ((c / semiaxes[0]).powi(2) + (s / semiaxes[1]).powi(2)).sqrt()
            }
            Shape::Polygon { vertices } => {
                let d = Vec2::polar(phi);
                let m = vertices.len();
                (0..m)
                    .filter_map(|i| {
                        let (n, c) = polygon::edge_normal(vertices, i);
                        let nd = n.dot(d);
                        (nd > 0.0).then(|| c / nd)
                    })
                    .fold(f64::INFINITY, f64::min)
            }
            Shape::Trig { .. } => {
                let theta = self.normal_angle_at_radial(phi);
                let jet = self.jet(theta).expect("trig jet");
                jet.h.hypot(jet.dh)
            }
            Shape::Polar(inner) => 1.0 / inner.support_angle(phi),
        }
    }

    /// Outer normal angle of ∂K at its point in direction `phi`.
    ///
    /// For polygons at a vertex, the normal of the edge found first is used.
    pub fn normal_angle_at_radial(&self, phi: f64) -> f64 {
        match &self.shape {
            Shape::Ball { .. } => phi,
            Shape::Ellipsoid { semiaxes, rotation } => {
                let psi = phi - rotation;
                let (s, c) = psi.sin_cos();
                let n = Vec2::new(c / (semiaxes[0] * semiaxes[0]), s / (semiaxes[1] * semiaxes[1]));
                n.angle() + rotation
            }
            Shape::Polygon { vertices } => {
                let d = Vec2::polar(phi);
                let m = vertices.len();
                let mut best = (f64::INFINITY, 0.0);
                for i in 0..m {
                    let (n, c) = polygon::edge_normal(vertices, i);
                    let nd = n.dot(d);
                    if nd > 0.0 && c / nd < best.0 {
                        best = (c / nd, n.angle());
                    }
                }
                best.1
            }
            Shape::Trig { .. } => {
                // φ(θ) = θ + atan2(h', h) is increasing with slope h(h+h'')/|x|²
                let f = |theta: f64| {
                    let j = self.jet(theta).expect("trig jet");
                    let r2 = j.h * j.h + j.dh * j.dh;
                    (
                        theta + j.dh.atan2(j.h) - phi,
                        j.h * j.radius_of_curvature() / r2,
                    )
                };
                safe_newton_increasing(f, phi - 0.5 * PI, phi + 0.5 * PI, phi, 1e-15)
            }
            Shape::Polar(inner) => {
                // the point of K° in direction φ is u/h_inner(u); its normal
                // points along x_inner(u)
                let j = inner.jet(phi).expect("polar of a smooth body");
                phi + j.dh.atan2(j.h)
            }
        }
    }

    /// Angles where the support function has kinks (polygon edge normals).
    pub fn support_kinks(&self) -> Vec<f64> {
        match &self.shape {
            Shape::Polygon { vertices } => (0..vertices.len())
                .map(|i| polygon::edge_normal(vertices, i).0.angle())
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Angles where the radial function has kinks (polygon vertices).
    pub fn radial_kinks(&self) -> Vec<f64> {
        match &self.shape {
            Shape::Polygon { vertices } => vertices.iter().map(|v| v.angle()).collect(),
            _ => Vec::new(),
        }
    }

    /// Boundary point with outer normal `u` (C²₊ bodies only).
    pub fn boundary_point(&self, u: &Direction) -> Result<BoundaryPoint> {
        self.require_smooth("boundary_point")?;
        Ok(self.boundary_point_at(u.angle()))
    }

    fn boundary_point_at(&self, theta: f64) -> BoundaryPoint {
        match &self.shape {
            Shape::Polar(inner) => {
                let phi = inner.normal_angle_at_radial(theta);
                polar_boundary_point(inner, phi)
            }
            _ => self.jet(theta).expect("smooth planar body").boundary_point(theta),
        }
    }

    /// A point of K maximizing `⟨·, u(theta)⟩` (planar bodies; for polygons
    /// the first maximizing vertex).
    pub fn support_point(&self, theta: f64) -> Vec2 {
        match &self.shape {
            Shape::Polygon { vertices } => {
                let u = Vec2::polar(theta);
                let mut best = vertices[0];
                for v in vertices {
                    if v.dot(u) > best.dot(u) {
                        best = *v;
                    }
                }
                best
            }
            _ => self.boundary_point_at(theta).x,
        }
    }

    /// `N` boundary nodes with equal parameter spacing and their μ_K weights.
    /// The rule is the periodic trapezoid rule in the normal angle.
    pub fn boundary_samples(&self, n: usize) -> Result<Vec<BoundarySample>> {
        self.require_smooth("boundary_samples")?;
        if n < 8 {
            return Err(Error::InvalidInput(format!("boundary grid too small: {n}")));
        }
        let step = 2.0 * PI / n as f64;
        Ok((0..n)
            .map(|j| {
                let param = j as f64 * step;
                match &self.shape {
                    Shape::Polar(inner) => {
                        let jet = inner.jet(param).expect("polar of a smooth body");
                        let r = jet.h.hypot(jet.dh);
                        BoundarySample {
                            param,
                            point: polar_boundary_point(inner, param),
                            weight: r / (jet.h * jet.h) * step,
                        }
                    }
                    _ => {
                        let jet = self.jet(param).expect("smooth planar body");
                        BoundarySample {
                            param,
                            point: jet.boundary_point(param),
                            weight: jet.radius_of_curvature() * step,
                        }
                    }
                }
            })
            .collect())
    }

    /// ∫_{∂K} F dμ_K on an `n`-node grid.
    pub fn boundary_integral<F>(&self, n: usize, f: F) -> Result<f64>
    where
        F: Fn(&BoundaryPoint) -> f64,
    {
        let terms: Vec<f64> = self
            .boundary_samples(n)?
            .iter()
            .map(|s| f(&s.point) * s.weight)
            .collect();
        Ok(pairwise_sum(&terms))
    }

    /// Polar body `K° = {y : ⟨x, y⟩ ≤ 1 ∀x ∈ K}`.
    pub fn polar(&self) -> Result<ConvexBody> {
        let shape = match &self.shape {
            Shape::Ball { radius } => Shape::Ball {
                radius: 1.0 / radius,
            },
            Shape::Ellipsoid { semiaxes, rotation } => Shape::Ellipsoid {
                semiaxes: semiaxes.iter().map(|a| 1.0 / a).collect(),
                rotation: *rotation,
            },
            Shape::Polygon { vertices } => {
                let dual: Vec<Vec2> = (0..vertices.len())
                    .map(|i| {
                        let (n, c) = polygon::edge_normal(vertices, i);
                        n * (1.0 / c)
                    })
                    .collect();
                polygon::validate(&dual)?;
                Shape::Polygon { vertices: dual }
            }
            Shape::Trig { .. } => Shape::Polar(Box::new(self.clone())),
            Shape::Polar(inner) => return Ok((**inner).clone()),
        };
        Ok(Self {
            dim: self.dim,
            shape,
        })
    }

    /// Volume |K|.
    pub fn volume(&self) -> f64 {
        match &self.shape {
            Shape::Ball { radius } => unit_ball_volume(self.dim) * radius.powi(self.dim as i32),
            Shape::Ellipsoid { semiaxes, .. } => {
                unit_ball_volume(self.dim) * semiaxes.iter().product::<f64>()
            }
            Shape::Polygon { vertices } => polygon::signed_area(vertices),
            Shape::Trig { .. } => {
                // h (h + h'') is a trigonometric polynomial: the rule is exact
                let jets = |t: f64| {
                    let j = self.jet(t).expect("trig jet");
                    j.h * j.radius_of_curvature()
                };
                0.5 * periodic_trapezoid(jets, DEFAULT_BOUNDARY_GRID)
            }
            Shape::Polar(inner) => {
                let f = |t: f64| inner.support_angle(t).powi(-2);
                0.5 * periodic_trapezoid(f, DEFAULT_BOUNDARY_GRID)
            }
        }
    }

    /// Minimal and maximal principal radius of curvature over ∂K.
    pub fn principal_radii_extremes(&self) -> Result<(f64, f64)> {
        match &self.shape {
            Shape::Ball { radius } => return Ok((*radius, *radius)),
            Shape::Ellipsoid { semiaxes, .. } => {
                let lo = semiaxes.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = semiaxes.iter().copied().fold(0.0, f64::max);
                return Ok((lo * lo / hi, hi * hi / lo));
            }
            _ => {}
        }
        self.require_smooth("principal_radii_extremes")?;
        let radius = |t: f64| 1.0 / self.radius_param_curvature(t);
        let n = DEFAULT_BOUNDARY_GRID;
        let step = 2.0 * PI / n as f64;
        let values: Vec<f64> = (0..n).map(|j| radius(j as f64 * step)).collect();
        let (imin, imax) = argminmax(&values);
        let (_, rmax) = golden_max(radius, (imax as f64 - 1.0) * step, (imax as f64 + 1.0) * step, 1e-12);
        let (_, neg_rmin) = golden_max(
            |t| -radius(t),
            (imin as f64 - 1.0) * step,
            (imin as f64 + 1.0) * step,
            1e-12,
        );
        Ok(((-neg_rmin).min(values[imin]), rmax.max(values[imax])))
    }

    // curvature at the boundary node with parameter t (see `boundary_samples`)
    fn radius_param_curvature(&self, t: f64) -> f64 {
        match &self.shape {
            Shape::Polar(inner) => polar_boundary_point(inner, t).curvature,
            _ => 1.0 / self.jet(t).expect("smooth planar body").radius_of_curvature(),
        }
    }

    /// Cone-measure densities at the boundary point with outer normal `u`.
    pub fn cone_densities(&self, u: &Direction) -> Result<ConeDensities> {
        let bp = self.boundary_point(u)?;
        let polar_volume = self.polar()?.volume();
        Ok(cone_densities_at(&bp, self.volume(), polar_volume, self.dim))
    }

    /// Centroid (planar bodies).
    pub fn centroid(&self) -> Result<Vec2> {
        self.require_planar("centroid")?;
        match &self.shape {
            Shape::Ball { .. } | Shape::Ellipsoid { .. } => Ok(Vec2::ZERO),
            Shape::Polygon { vertices } => Ok(polygon::centroid(vertices)),
            _ => {
                // ∫_K x dx = (1/3) ∫_{∂K} x ⟨x, N⟩ dμ
                let samples = self.boundary_samples(DEFAULT_BOUNDARY_GRID)?;
                let xs: Vec<f64> = samples
                    .iter()
                    .map(|s| s.point.x.x * s.point.support * s.weight)
                    .collect();
                let ys: Vec<f64> = samples
                    .iter()
                    .map(|s| s.point.x.y * s.point.support * s.weight)
                    .collect();
                let v3 = 3.0 * self.volume();
                Ok(Vec2::new(pairwise_sum(&xs) / v3, pairwise_sum(&ys) / v3))
            }
        }
    }

    /// Logs a warning and returns `false` when the centroid is farther than
    /// `1e-6 · diameter` from the origin.
    pub fn check_centered(&self) -> bool {
        let Ok(c) = self.centroid() else {
            return true;
        };
        let diameter = 2.0 * self.circumradius();
        if c.norm() > 1e-6 * diameter {
            log::warn!(
                "centroid of {self} is ({}, {}), not the origin; entropy identities assume a centered body",
                c.x,
                c.y
            );
            return false;
        }
        true
    }

    /// `max_u h_K(u)` (sampled for smooth non-closed-form bodies).
    pub fn circumradius(&self) -> f64 {
        match &self.shape {
            Shape::Ball { radius } => *radius,
            Shape::Ellipsoid { semiaxes, .. } => semiaxes.iter().copied().fold(0.0, f64::max),
            Shape::Polygon { vertices } => vertices.iter().map(|v| v.norm()).fold(0.0, f64::max),
            _ => sample_extreme(|t| self.support_angle(t), true),
        }
    }

    /// `min_u h_K(u)`: the largest centered ball inside K.
    pub fn inradius(&self) -> f64 {
        match &self.shape {
            Shape::Ball { radius } => *radius,
            Shape::Ellipsoid { semiaxes, .. } => semiaxes.iter().copied().fold(f64::INFINITY, f64::min),
            _ => {
                let kinks = self.support_kinks();
                let sampled = sample_extreme(|t| self.support_angle(t), false);
                kinks
                    .iter()
                    .map(|&t| self.support_angle(t))
                    .fold(sampled, f64::min)
            }
        }
    }

    /// Whether `p ∈ K` (closed body).
    pub fn contains(&self, p: Vec2) -> bool {
        let r = p.norm();
        r == 0.0 || r <= self.radial(p.angle())
    }

    /// `K ⊆ self`, tested as `h_K ≤ h_self (1 + 1e-12)` on a dense grid.
    pub fn contains_body(&self, other: &ConvexBody) -> bool {
        let n = DEFAULT_BOUNDARY_GRID;
        let mut angles: Vec<f64> = (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect();
        angles.extend(other.support_kinks());
        angles
            .iter()
            .all(|&t| other.support_angle(t) <= self.support_angle(t) * (1.0 + 1e-12))
    }

    /// The body rotated counterclockwise by `angle` (planar bodies).
    pub fn rotated(&self, angle: f64) -> Result<ConvexBody> {
        self.require_planar("rotated")?;
        let shape = match &self.shape {
            Shape::Ball { radius } => Shape::Ball { radius: *radius },
            Shape::Ellipsoid { semiaxes, rotation } => Shape::Ellipsoid {
                semiaxes: semiaxes.clone(),
                rotation: rotation + angle,
            },
            Shape::Polygon { vertices } => Shape::Polygon {
                vertices: vertices.iter().map(|v| v.rotate(angle)).collect(),
            },
            Shape::Trig { c0, cos, sin } => {
                let len = cos.len().max(sin.len());
                let mut nc = Vec::with_capacity(len);
                let mut ns = Vec::with_capacity(len);
                for i in 0..len {
                    let c = cos.get(i).copied().unwrap_or(0.0);
                    let s = sin.get(i).copied().unwrap_or(0.0);
                    let (sk, ck) = ((i + 1) as f64 * angle).sin_cos();
                    nc.push(c * ck - s * sk);
                    ns.push(c * sk + s * ck);
                }
                Shape::Trig {
                    c0: *c0,
                    cos: nc,
                    sin: ns,
                }
            }
            Shape::Polar(inner) => Shape::Polar(Box::new(inner.rotated(angle)?)),
        };
        Ok(Self { dim: 2, shape })
    }

    /// The dilate `λK`, `λ > 0`.
    pub fn scaled(&self, lambda: f64) -> Result<ConvexBody> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidInput(format!("scale must be positive, got {lambda}")));
        }
        let shape = match &self.shape {
            Shape::Ball { radius } => Shape::Ball {
                radius: radius * lambda,
            },
            Shape::Ellipsoid { semiaxes, rotation } => Shape::Ellipsoid {
                semiaxes: semiaxes.iter().map(|a| a * lambda).collect(),
                rotation: *rotation,
            },
            Shape::Polygon { vertices } => Shape::Polygon {
                vertices: vertices.iter().map(|v| *v * lambda).collect(),
            },
            Shape::Trig { c0, cos, sin } => Shape::Trig {
                c0: c0 * lambda,
                cos: cos.iter().map(|c| c * lambda).collect(),
                sin: sin.iter().map(|s| s * lambda).collect(),
            },
            Shape::Polar(inner) => Shape::Polar(Box::new(inner.scaled(1.0 / lambda)?)),
        };
        Ok(Self {
            dim: self.dim,
            shape,
        })
    }
}

/// Point of ∂K° dual to the point of ∂K with outer normal angle `theta`,
/// where `inner = K` is smooth.
fn polar_boundary_point(inner: &ConvexBody, theta: f64) -> BoundaryPoint {
    let jet = inner.jet(theta).expect("polar of a smooth body");
    let x = jet.boundary_point(theta);
    let r = x.x.norm();
    // κ_{K°}(y) = (⟨x,N_K⟩ ⟨y,N_{K°}⟩)^{n+1} / κ_K(x), with ⟨y, N_{K°}(y)⟩ = 1/|x|
    let curvature = (jet.h / r).powi(3) / x.curvature;
    BoundaryPoint {
        x: x.polar_contact,
        normal: x.x * (1.0 / r),
        support: 1.0 / r,
        curvature,
        polar_contact: x.x,
    }
}

/// `p = κ / (⟨x,N⟩^n n|K°|)` and `q = ⟨x,N⟩ / (n|K|)`.
pub fn cone_densities_at(bp: &BoundaryPoint, volume: f64, polar_volume: f64, n: usize) -> ConeDensities {
    let nf = n as f64;
    ConeDensities {
        p: bp.curvature / (bp.support.powi(n as i32) * nf * polar_volume),
        q: bp.support / (nf * volume),
    }
}

fn argminmax(values: &[f64]) -> (usize, usize) {
    let mut imin = 0;
    let mut imax = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[imin] {
            imin = i;
        }
        if *v > values[imax] {
            imax = i;
        }
    }
    (imin, imax)
}

fn sample_extreme<F: Fn(f64) -> f64>(f: F, max: bool) -> f64 {
    let n = DEFAULT_BOUNDARY_GRID;
    let step = 2.0 * PI / n as f64;
    let values: Vec<f64> = (0..n).map(|j| f(j as f64 * step)).collect();
    let (imin, imax) = argminmax(&values);
    if max {
        let (_, v) = golden_max(&f, (imax as f64 - 1.0) * step, (imax as f64 + 1.0) * step, 1e-12);
        v.max(values[imax])
    } else {
        let (_, v) = golden_max(|t| -f(t), (imin as f64 - 1.0) * step, (imin as f64 + 1.0) * step, 1e-12);
        (-v).min(values[imin])
    }
}

impl fmt::Display for ConvexBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.shape {
            Shape::Ball { radius } if self.dim == 2 => write!(f, "ball:r={radius}"),
            Shape::Ball { radius } => write!(f, "ball:r={radius},n={}", self.dim),
            Shape::Ellipsoid { semiaxes, rotation } if semiaxes.len() == 2 => {
                write!(f, "ellipse:a={},b={}", semiaxes[0], semiaxes[1])?;
                if *rotation != 0.0 {
                    write!(f, ",rot={rotation}")?;
                }
                Ok(())
            }
            Shape::Ellipsoid { semiaxes, .. } => {
                let axes: Vec<String> = semiaxes.iter().map(|a| a.to_string()).collect();
                write!(f, "ellipsoid:{}", axes.join(","))
            }
            Shape::Polygon { vertices } => {
                let pts: Vec<String> = vertices.iter().map(|v| format!("{},{}", v.x, v.y)).collect();
                write!(f, "polygon:{}", pts.join(";"))
            }
            Shape::Trig { c0, cos, sin } => {
                write!(f, "trig:c0={c0}")?;
                for (i, c) in cos.iter().enumerate() {
                    if *c != 0.0 {
                        write!(f, ",c{}={c}", i + 1)?;
                    }
                }
                for (i, s) in sin.iter().enumerate() {
                    if *s != 0.0 {
                        write!(f, ",s{}={s}", i + 1)?;
                    }
                }
                Ok(())
            }
            Shape::Polar(inner) => write!(f, "polar({inner})"),
        }
    }
}
