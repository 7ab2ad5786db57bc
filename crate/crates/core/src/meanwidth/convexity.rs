//! Convexity test for sampled star bodies, with an optional nonconvexity
//! witness: a point of the closed convex hull of `K_f[t]` where `w_f > t`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::Result;
use crate::geometry::polygon;
use crate::vec2::Vec2;

use super::star::StarBodyApprox;
use super::MeanWidth;

/// Minimal normalized turn accepted as convex.
pub const TURN_TOLERANCE: f64 = 1e-6;
/// Maximal relative area defect against the convex hull.
pub const HULL_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub point: Vec2,
    pub wf: f64,
    pub t: f64,
    /// Whether the point lies in the closed convex hull of the sampled body
    /// (unbounded directions act as recession directions).
    pub in_hull: bool,
    /// `w_f(point) − t`.
    pub excess: f64,
}

impl Witness {
    pub fn certifies_nonconvexity(&self) -> bool {
        self.in_hull && self.excess > 0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub convex: bool,
    /// Smallest `sin` of the turning angle between consecutive edges.
    pub min_turn: f64,
    /// `(|hull| − |polygon|)/|hull|`.
    pub hull_defect: f64,
    /// Radius used in place of `+∞`, if the body is unbounded.
    pub far_radius: Option<f64>,
    pub witness: Option<Witness>,
}

/// Tests the sampled boundary polygon for convexity. Unbounded directions are
/// replaced by points at `1e3` times the largest finite radius. When
/// `witness` is given, the point is also checked against the closed convex
/// hull and `w_f`.
pub fn convexity_test(s: &StarBodyApprox, witness: Option<(&MeanWidth, Vec2)>) -> Result<ConvexityReport> {
    let finite_max = s
        .radii
        .iter()
        .copied()
        .filter(|r| r.is_finite())
        .fold(0.0, f64::max);
    let far = (!s.is_bounded()).then_some(1e3 * finite_max.max(1.0));
    let points: Vec<Vec2> = s
        .thetas
        .iter()
        .zip(&s.radii)
        .map(|(&t, &r)| Vec2::polar(t) * if r.is_finite() { r } else { far.unwrap_or(r) })
        .collect();
    let m = points.len();
    let mut min_turn = f64::INFINITY;
    for i in 0..m {
        let a = points[(i + m - 1) % m];
        let b = points[i];
        let c = points[(i + 1) % m];
        let (e0, e1) = (b - a, c - b);
        let denom = e0.norm() * e1.norm();
        if denom > 0.0 {
            min_turn = min_turn.min(e0.cross(e1) / denom);
        }
    }
    let hull = convex_hull(&points);
    let hull_area = polygon::signed_area(&hull);
    let area = polygon::signed_area(&points);
    let hull_defect = if hull_area > 0.0 { (hull_area - area) / hull_area } else { 0.0 };

    let witness = match witness {
        Some((mw, x)) => {
            let wf = mw.wf(x)?;
            Some(Witness {
                point: x,
                wf,
                t: s.t,
                in_hull: in_closed_hull(s, x),
                excess: wf - s.t,
            })
        }
        None => None,
    };
    let convex = min_turn >= -TURN_TOLERANCE
        && hull_defect <= HULL_TOLERANCE
        && !witness.is_some_and(|w| w.certifies_nonconvexity());
    Ok(ConvexityReport {
        convex,
        min_turn,
        hull_defect,
        far_radius: far,
        witness,
    })
}

/// Andrew's monotone chain; counterclockwise, without collinear points.
pub fn convex_hull(points: &[Vec2]) -> Vec<Vec2> {
    let mut pts: Vec<Vec2> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Vec2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Vec2>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                if (b - a).cross(p - b) <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// `x ∈ conv(bounded samples) + cone(unbounded directions)`, tested through
/// support functions on a dense set of directions.
fn in_closed_hull(s: &StarBodyApprox, x: Vec2) -> bool {
    let bounded: Vec<Vec2> = s
        .thetas
        .iter()
        .zip(&s.radii)
        .filter(|(_, r)| r.is_finite())
        .map(|(&t, &r)| Vec2::polar(t) * r)
        .collect();
    let recession: Vec<Vec2> = s.unbounded_directions().into_iter().map(Vec2::polar).collect();
    let scale = bounded.iter().map(|p| p.norm()).fold(x.norm(), f64::max);
    let dirs = 4 * s.len().max(360);
    (0..dirs).all(|j| {
        let w = Vec2::polar(2.0 * PI * j as f64 / dirs as f64);
        if recession.iter().any(|d| d.dot(w) > 1e-12) {
            return true;
        }
        let h = bounded.iter().map(|p| p.dot(w)).fold(f64::NEG_INFINITY, f64::max);
        x.dot(w) <= h + 1e-9 * scale
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ConvexBody;

    #[test]
    fn ellipse_samples_are_convex() {
        let e = ConvexBody::ellipse(2.0, 1.0).unwrap();
        let r = convexity_test(&StarBodyApprox::of_body(&e, 720), None).unwrap();
        assert!(r.convex, "{r:?}");
    }

    #[test]
    fn star_is_not_convex() {
        let radii = (0..720)
            .map(|j| 1.0 + 0.3 * (5.0 * 2.0 * PI * j as f64 / 720.0).cos())
            .collect();
        let r = convexity_test(&StarBodyApprox::from_radii(radii), None).unwrap();
        assert!(!r.convex);
        assert!(r.min_turn < 0.0);
    }

    #[test]
    fn hull_of_square_with_interior_points() {
        let pts = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(0.5, 0.5),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        ];
        let h = convex_hull(&pts);
        assert_eq!(h.len(), 4);
        assert_eq!(polygon::signed_area(&h), 1.0);
    }

    #[test]
    fn recession_directions_enter_the_hull() {
        let mut radii = vec![1.0; 8];
        radii[0] = f64::INFINITY;
        let s = StarBodyApprox::from_radii(radii);
        assert!(in_closed_hull(&s, Vec2::new(50.0, 0.5)));
        assert!(!in_closed_hull(&s, Vec2::new(50.0, 1.5)));
    }
}
