//! Weighted masses of caps `K° ∩ {⟨y, x⟩ ≥ 1}` and half-planes of the polar.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{polygon, sphere_area, ConvexBody, Shape};
use crate::quad::{adaptive, Tolerance};
use crate::roots::bisect;
use crate::vec2::Vec2;
use crate::weights::Weight;

/// Which algorithm evaluates a cap mass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CapPath {
    /// Exact polygon clipping when available, quadrature otherwise.
    #[default]
    Auto,
    /// Always the polar-coordinate quadrature.
    Generic,
}

/// Cap of K° cut off by the hyperplane `{y : ⟨y, x⟩ = 1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapSpec {
    apex: Vec2,
}

impl CapSpec {
    pub fn new(apex: Vec2) -> Result<Self> {
        if !(apex.x.is_finite() && apex.y.is_finite()) {
            return Err(Error::InvalidInput("cap apex is not finite".into()));
        }
        if apex == Vec2::ZERO {
            return Err(Error::InvalidInput("cap apex x = 0 is undefined".into()));
        }
        Ok(Self { apex })
    }

    pub fn apex(&self) -> Vec2 {
        self.apex
    }
}

pub(crate) fn cap_tolerance() -> Tolerance {
    Tolerance {
        abs: 1e-16,
        rel: 1e-12,
        max_intervals: 400,
    }
}

/// `2/ω(S^{n-1})` for the planar engine.
pub(crate) fn normalization() -> f64 {
    2.0 / sphere_area(2)
}

/// `m_f(K° ∩ {⟨y, x⟩ ≥ 1})`, including the factor `2/ω(S^{n-1})`.
pub fn cap_region_integral(polar_body: &ConvexBody, cap: &CapSpec, f: &Weight) -> Result<f64> {
    cap_region_integral_with(polar_body, cap, f, CapPath::Auto)
}

pub fn cap_region_integral_with(
    polar_body: &ConvexBody,
    cap: &CapSpec,
    f: &Weight,
    path: CapPath,
) -> Result<f64> {
    planar(polar_body)?;
    let x = cap.apex;
    let r = x.norm();
    let psi = x.angle();
    if r * polar_body.support_angle(psi) <= 1.0 {
        return Ok(0.0);
    }
    if path == CapPath::Auto {
        if let Some(v) = exact_polygon_mass(polar_body, x, 1.0, f) {
            return Ok(v);
        }
    }
    // the arc {φ : r cos(φ−ψ) ρ(φ) > 1} is connected and contains the
    // direction of the support point of K° in direction x
    let phi_star = unwrap_near(polar_body.support_point(psi).angle(), psi);
    let excess = |phi: f64| r * (phi - psi).cos() * polar_body.radial(phi) - 1.0;
    let hi = bisect(excess, phi_star, psi + 0.5 * PI, 1e-15);
    let lo = bisect(excess, psi - 0.5 * PI, phi_star, 1e-15);
    let integrand = |phi: f64| {
        let c = (phi - psi).cos();
        if c <= 0.0 {
            return 0.0;
        }
        f.ray_integral(phi, 1.0 / (r * c), polar_body.radial(phi))
    };
    let breaks = breakpoints(polar_body, f, lo, hi);
    let q = adaptive(integrand, lo, hi, &breaks, cap_tolerance());
    Ok(normalization() * q.value)
}

/// `m_f(K° ∩ {⟨y, u(psi)⟩ ≥ 0})`; infinite when f is not integrable at 0.
pub fn halfplane_integral(polar_body: &ConvexBody, psi: f64, f: &Weight, path: CapPath) -> Result<f64> {
    planar(polar_body)?;
    if let (CapPath::Auto, Some(v)) = (path, exact_polygon_mass(polar_body, Vec2::polar(psi), 0.0, f)) {
        return Ok(v);
    }
    if let Some(alpha) = f.homogeneity() {
        if alpha <= -2.0 && f.ray_integral(psi, 0.0, 1.0) != 0.0 {
            return Ok(f64::INFINITY);
        }
    }
    let (lo, hi) = (psi - 0.5 * PI, psi + 0.5 * PI);
    let integrand = |phi: f64| f.ray_integral(phi, 0.0, polar_body.radial(phi));
    let breaks = breakpoints(polar_body, f, lo, hi);
    let q = adaptive(integrand, lo, hi, &breaks, cap_tolerance());
    Ok(normalization() * q.value)
}

fn planar(body: &ConvexBody) -> Result<()> {
    if body.dim() != 2 {
        return Err(Error::Unsupported {
            op: "cap_region_integral",
            variant: "higher-dimensional",
        });
    }
    Ok(())
}

/// `a + 2πk` closest to `center`.
pub(crate) fn unwrap_near(a: f64, center: f64) -> f64 {
    a - 2.0 * PI * ((a - center) / (2.0 * PI)).round()
}

fn breakpoints(body: &ConvexBody, f: &Weight, lo: f64, hi: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for b in body.radial_kinks().into_iter().chain(f.angular_breaks()) {
        for k in -2..=2 {
            let p = b + 2.0 * PI * k as f64;
            if p > lo && p < hi {
                out.push(p);
            }
        }
    }
    out
}

/// Exact mass of `P ∩ {⟨y, normal⟩ ≥ offset}` for polygonal P and weights
/// that are constant on the two half-planes `{y_2 ≥ 0}` and `{y_2 < 0}`.
fn exact_polygon_mass(body: &ConvexBody, normal: Vec2, offset: f64, f: &Weight) -> Option<f64> {
    let Shape::Polygon { vertices } = body.shape() else {
        return None;
    };
    let (top, bottom) = match f {
        Weight::Const { value } => (*value, *value),
        Weight::Piecewise { top, bottom } => (*top, *bottom),
        _ => return None,
    };
    let clipped = polygon::clip_halfplane(vertices, normal, offset);
    if clipped.len() < 3 {
        return Some(0.0);
    }
    let mass = if top == bottom {
        top * polygon::signed_area(&clipped)
    } else {
        let upper = polygon::clip_halfplane(&clipped, Vec2::new(0.0, 1.0), 0.0);
        let lower = polygon::clip_halfplane(&clipped, Vec2::new(0.0, -1.0), 0.0);
        top * polygon::signed_area(&upper) + bottom * polygon::signed_area(&lower)
    };
    Some(normalization() * mass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{const_weight, piecewise_halfspace_weight, power_weight};
    use approx::assert_relative_eq;

    #[test]
    fn zero_apex_rejected() {
        assert!(CapSpec::new(Vec2::ZERO).is_err());
    }

    #[test]
    fn unit_disk_segment() {
        let disk = ConvexBody::ball(1.0).unwrap();
        let cap = CapSpec::new(Vec2::new(2.0, 0.0)).unwrap();
        let m = cap_region_integral(&disk, &cap, &const_weight(1.0).unwrap()).unwrap();
        assert_relative_eq!(m, 0.195_501_109_477_885_32, max_relative = 1e-12);
        let inside = CapSpec::new(Vec2::new(0.5, 0.5)).unwrap();
        assert_eq!(cap_region_integral(&disk, &inside, &const_weight(1.0).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn polygon_paths_agree() {
        let cross = ConvexBody::square().polar().unwrap();
        let a = 1.0 / (1.0 - 3f64.sqrt() / 2.0);
        let w = piecewise_halfspace_weight(0.5, 1.0).unwrap();
        for apex in [Vec2::new(0.0, -a), Vec2::new(a, -a), Vec2::new(1.3, 0.4), Vec2::new(-2.0, 0.1)] {
            let cap = CapSpec::new(apex).unwrap();
            let exact = cap_region_integral_with(&cross, &cap, &w, CapPath::Auto).unwrap();
            let generic = cap_region_integral_with(&cross, &cap, &w, CapPath::Generic).unwrap();
            assert_relative_eq!(exact, generic, max_relative = 1e-10, epsilon = 1e-14);
        }
        let cap = CapSpec::new(Vec2::new(0.0, -a)).unwrap();
        assert_relative_eq!(cap_region_integral(&cross, &cap, &w).unwrap(), 3.0 / (4.0 * PI), max_relative = 1e-14);
    }

    #[test]
    fn halfplane_limits() {
        let cross = ConvexBody::square().polar().unwrap();
        let w = piecewise_halfspace_weight(0.5, 1.0).unwrap();
        for path in [CapPath::Auto, CapPath::Generic] {
            assert_relative_eq!(halfplane_integral(&cross, -0.5 * PI, &w, path).unwrap(), 1.0 / PI, max_relative = 1e-12);
            assert_relative_eq!(halfplane_integral(&cross, 0.5 * PI, &w, path).unwrap(), 0.5 / PI, max_relative = 1e-12);
            assert_relative_eq!(halfplane_integral(&cross, 0.0, &w, path).unwrap(), 0.75 / PI, max_relative = 1e-12);
        }
        let disk = ConvexBody::ball(1.0).unwrap();
        assert!(halfplane_integral(&disk, 0.3, &power_weight(2.0).unwrap(), CapPath::Auto).unwrap().is_infinite());
        assert_relative_eq!(
            halfplane_integral(&disk, 0.3, &power_weight(1.0).unwrap(), CapPath::Auto).unwrap(),
            1.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn power_weight_cap_matches_direct_quadrature() {
        // ∫ ‖ξ‖^{-3} over the part of the disk of radius 1/2 with ξ_1 ≥ 0.4
        let disk = ConvexBody::ball(0.5).unwrap();
        let cap = CapSpec::new(Vec2::new(2.5, 0.0)).unwrap();
        let m = cap_region_integral(&disk, &cap, &power_weight(3.0).unwrap()).unwrap();
        // inner integral over y is 4√(1/4 − x²)/x²; substitute x = cos(τ)/2
        let reference = 4.0 * (0.75 - 0.8f64.acos()) / PI;
        assert_relative_eq!(m, reference, max_relative = 1e-12);
    }
}
