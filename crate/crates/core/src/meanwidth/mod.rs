//! The function `w_f`, the mean width bodies `K_f[t] = {x : w_f(x) ≤ t}`
//! sampled as star bodies, their volumes, and the width identities.

pub mod cap;
pub mod convexity;
pub mod identities;
pub mod star;

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::ConvexBody;
use crate::vec2::Vec2;
use crate::weights::Weight;

pub use cap::{cap_region_integral, cap_region_integral_with, halfplane_integral, CapPath, CapSpec};
pub use convexity::{convexity_test, ConvexityReport, Witness};
pub use identities::{
    entropy_identity_check, region_integral_between, width_f_difference_sphere, EntropyIdentity,
};
pub use star::{star_volume, volume_difference_radial, StarBodyApprox};

/// Relative bisection tolerance for radial extents.
pub const RADIAL_TOLERANCE: f64 = 1e-10;

/// Slack for classifying a direction as unbounded at `t = g(u)`.
pub const UNBOUNDED_SLACK: f64 = 1e-12;

/// A body with a weight on its polar: everything needed to evaluate `w_f`.
#[derive(Debug, Clone)]
pub struct MeanWidth {
    body: ConvexBody,
    polar: ConvexBody,
    weight: Weight,
    path: CapPath,
    lower_bound: Option<f64>,
}

impl MeanWidth {
    pub fn new(body: &ConvexBody, weight: &Weight) -> Result<Self> {
        if body.dim() != 2 {
            return Err(Error::Unsupported {
                op: "mean width body",
                variant: "higher-dimensional",
            });
        }
        let polar = body.polar()?;
        let lower_bound = weight.lower_bound_on(&polar);
        Ok(Self {
            body: body.clone(),
            polar,
            weight: weight.clone(),
            path: CapPath::Auto,
            lower_bound,
        })
    }

    /// Forces the generic quadrature path for every cap.
    pub fn with_path(mut self, path: CapPath) -> Self {
        self.path = path;
        self
    }

    pub fn body(&self) -> &ConvexBody {
        &self.body
    }

    pub fn polar(&self) -> &ConvexBody {
        &self.polar
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    /// Positivity constant of the weight on K°, if any.
    pub fn lower_bound(&self) -> Option<f64> {
        self.lower_bound
    }

    /// `w_f(x) = W_f(conv(x, K)) − W_f(K)`.
    pub fn wf(&self, x: Vec2) -> Result<f64> {
        let cap = CapSpec::new(x)?;
        if self.body.contains(x) {
            return Ok(0.0);
        }
        cap_region_integral_with(&self.polar, &cap, &self.weight, self.path)
    }

    /// `g(u) = sup_s w_f(s u(phi))`, the mass of `K° ∩ {⟨y, u⟩ ≥ 0}`.
    pub fn ray_limit(&self, phi: f64) -> Result<f64> {
        halfplane_integral(&self.polar, phi, &self.weight, self.path)
    }

    /// `sup{s : w_f(s u(phi)) ≤ t}`, `+∞` for unbounded directions.
    pub fn radial_extent(&self, t: f64, phi: f64) -> Result<f64> {
        self.radial_extent_tol(t, phi, RADIAL_TOLERANCE)
    }

    pub fn radial_extent_tol(&self, t: f64, phi: f64, rel_tol: f64) -> Result<f64> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::InvalidInput(format!("threshold must be finite and >= 0, got {t}")));
        }
        let base = self.body.radial(phi);
        if t >= self.ray_limit(phi)? - UNBOUNDED_SLACK {
            return Ok(f64::INFINITY);
        }
        if t == 0.0 && self.lower_bound.is_some() {
            return Ok(base);
        }
        let u = Vec2::polar(phi);
        let w = |s: f64| self.wf(u * s);
        let mut lo = base;
        let mut hi = 2.0 * base;
        let mut doublings = 0;
        while w(hi)? <= t {
            lo = hi;
            hi *= 2.0;
            doublings += 1;
            if doublings > 200 {
                return Err(Error::Numeric(format!(
                    "no bracket for w_f = {t} along angle {phi}"
                )));
            }
        }
        while hi - lo > rel_tol * hi {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if w(mid)? <= t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// `K_f[t]` sampled on `n` equally spaced directions.
    pub fn mean_width_body(&self, t: f64, n: usize) -> Result<StarBodyApprox> {
        if n < 8 {
            return Err(Error::InvalidInput(format!("direction grid too small: {n}")));
        }
        let thetas: Vec<f64> = (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect();
        let radii = self.extents(t, &thetas)?;
        Ok(StarBodyApprox::new(
            thetas,
            radii,
            t,
            self.body.to_string(),
            self.weight.to_string(),
        ))
    }

    /// Radial extents at arbitrary angles, evaluated in parallel.
    pub fn extents(&self, t: f64, thetas: &[f64]) -> Result<Vec<f64>> {
        thetas
            .par_iter()
            .map(|&phi| self.radial_extent(t, phi))
            .collect()
    }
}

/// `w_f(x)` for the body `body`.
pub fn wf(body: &ConvexBody, f: &Weight, x: Vec2) -> Result<f64> {
    MeanWidth::new(body, f)?.wf(x)
}

/// `lim_{s→∞} w_f(s u)`.
pub fn wf_ray_limit(body: &ConvexBody, f: &Weight, phi: f64) -> Result<f64> {
    MeanWidth::new(body, f)?.ray_limit(phi)
}

pub fn radial_extent(body: &ConvexBody, f: &Weight, t: f64, phi: f64) -> Result<f64> {
    MeanWidth::new(body, f)?.radial_extent(t, phi)
}

pub fn mean_width_body(body: &ConvexBody, f: &Weight, t: f64, n: usize) -> Result<StarBodyApprox> {
    MeanWidth::new(body, f)?.mean_width_body(t, n)
}
