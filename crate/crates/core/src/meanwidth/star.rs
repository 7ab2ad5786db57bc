//! Star bodies given by radial extents on a uniform direction grid.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ConvexBody;
use crate::quad::pairwise_sum;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarBodyApprox {
    pub body: String,
    pub weight: String,
    pub t: f64,
    /// Uniform angles `2πj/N`.
    pub thetas: Vec<f64>,
    /// Radial extents; `+∞` in unbounded directions.
    pub radii: Vec<f64>,
    pub unbounded: Vec<bool>,
}

impl StarBodyApprox {
    pub fn new(thetas: Vec<f64>, radii: Vec<f64>, t: f64, body: String, weight: String) -> Self {
        let unbounded = radii.iter().map(|r| r.is_infinite()).collect();
        Self {
            body,
            weight,
            t,
            thetas,
            radii,
            unbounded,
        }
    }

    /// Star body with the given radii on a uniform grid.
    pub fn from_radii(radii: Vec<f64>) -> Self {
        let n = radii.len();
        let thetas = (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect();
        Self::new(thetas, radii, 0.0, String::new(), String::new())
    }

    /// The radial function of a body sampled on `n` directions.
    pub fn of_body(body: &ConvexBody, n: usize) -> Self {
        let thetas: Vec<f64> = (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect();
        let radii = thetas.iter().map(|&t| body.radial(t)).collect();
        Self::new(thetas, radii, 0.0, body.to_string(), String::new())
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        !self.unbounded.iter().any(|&u| u)
    }

    /// Angles of the unbounded directions.
    pub fn unbounded_directions(&self) -> Vec<f64> {
        self.thetas
            .iter()
            .zip(&self.unbounded)
            .filter(|(_, &u)| u)
            .map(|(t, _)| *t)
            .collect()
    }

    /// Periodic 6-point Lagrange interpolation of `values` (sampled on this
    /// grid) at angle `phi`.
    pub fn interpolate(values: &[f64], phi: f64) -> f64 {
        let n = values.len();
        let h = 2.0 * PI / n as f64;
        let pos = phi.rem_euclid(2.0 * PI) / h;
        let base = pos.floor() as i64 - 2;
        let frac = pos - (base as f64);
        let mut acc = 0.0;
        for i in 0..6 {
            let mut l = 1.0;
            for j in 0..6 {
                if j != i {
                    l *= (frac - j as f64) / (i as f64 - j as f64);
                }
            }
            acc += l * values[(base + i as i64).rem_euclid(n as i64) as usize];
        }
        acc
    }
}

/// `(1/2)∫ρ² dφ` by the trapezoid rule.
pub fn star_volume(s: &StarBodyApprox) -> Result<f64> {
    if let Some(i) = s.unbounded.iter().position(|&u| u) {
        return Err(Error::InfiniteVolume { theta: s.thetas[i] });
    }
    if s.is_empty() {
        return Err(Error::InvalidInput("empty star body".into()));
    }
    let squares: Vec<f64> = s.radii.iter().map(|r| r * r).collect();
    Ok(0.5 * pairwise_sum(&squares) * 2.0 * PI / s.len() as f64)
}

/// `|L| − |K| = (1/n)∫_{∂K} ⟨x,N⟩[(‖x'‖/‖x‖)^n − 1] dμ_K`, where `x'` is the
/// point of ∂L on the ray through `x`.
pub fn volume_difference_radial(body: &ConvexBody, s: &StarBodyApprox) -> Result<f64> {
    if let Some(i) = s.unbounded.iter().position(|&u| u) {
        return Err(Error::InfiniteVolume { theta: s.thetas[i] });
    }
    let excess: Vec<f64> = s
        .thetas
        .iter()
        .zip(&s.radii)
        .map(|(&t, &r)| r / body.radial(t) - 1.0)
        .collect();
    if let Some(i) = excess.iter().position(|&e| e < -1e-12) {
        return Err(Error::Domain(format!(
            "star body does not contain the body at angle {}",
            s.thetas[i]
        )));
    }
    let n = body.dim() as f64;
    let samples = body.boundary_samples(s.len())?;
    let terms: Vec<f64> = samples
        .iter()
        .map(|b| {
            let e = StarBodyApprox::interpolate(&excess, b.point.x.angle());
            b.point.support * (n * e.ln_1p()).exp_m1() * b.weight
        })
        .collect();
    Ok(pairwise_sum(&terms) / n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn constant_radii_give_disk_area() {
        let s = StarBodyApprox::from_radii(vec![1.5; 64]);
        assert_relative_eq!(star_volume(&s).unwrap(), PI * 2.25, max_relative = 1e-14);
    }

    #[test]
    fn unbounded_volume_is_an_error() {
        let mut r = vec![1.0; 16];
        r[3] = f64::INFINITY;
        let s = StarBodyApprox::from_radii(r);
        assert!(matches!(star_volume(&s), Err(Error::InfiniteVolume { .. })));
        assert_eq!(s.unbounded_directions().len(), 1);
    }

    #[test]
    fn ellipse_radial_volume() {
        let e = ConvexBody::ellipse(2.0, 1.0).unwrap();
        let s = StarBodyApprox::of_body(&e, 4096);
        assert_relative_eq!(star_volume(&s).unwrap(), 2.0 * PI, max_relative = 1e-12);
        assert_eq!(volume_difference_radial(&e, &s).unwrap(), 0.0);
    }

    #[test]
    fn annulus_difference() {
        let b = ConvexBody::ball(1.0).unwrap();
        let s = StarBodyApprox::from_radii(vec![1.1; 256]);
        assert_relative_eq!(volume_difference_radial(&b, &s).unwrap(), PI * 0.21, max_relative = 1e-13);
        let inner = StarBodyApprox::from_radii(vec![0.9; 256]);
        assert!(matches!(volume_difference_radial(&b, &inner), Err(Error::Domain(_))));
    }

    #[test]
    fn interpolation_is_accurate_for_smooth_data() {
        let n = 512;
        let values: Vec<f64> = (0..n).map(|j| (2.0 * PI * j as f64 / n as f64).sin().exp()).collect();
        for phi in [0.001, 1.234, 3.3, 6.2] {
            assert_relative_eq!(StarBodyApprox::interpolate(&values, phi), phi.sin().exp(), max_relative = 1e-11);
        }
    }

    #[test]
    fn scaled_ellipse_difference_matches_area() {
        let e = ConvexBody::ellipse(2.0, 1.0).unwrap();
        let big = StarBodyApprox::of_body(&e.scaled(1.01).unwrap(), 1024);
        let d = volume_difference_radial(&e, &big).unwrap();
        assert_relative_eq!(d, 2.0 * PI * (1.0201 - 1.0), max_relative = 1e-11);
    }
}
